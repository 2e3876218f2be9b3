#pragma once

#include <string>
#include <vector>

namespace safechain {

// Strictly increasing time-varying gain Upsilon(t) used to scale every level
// of the barrier cascade.
//   Linear:      1 + t
//   Polynomial:  (1 + t)^p,        p >= 1
//   Exponential: a * exp(alpha t), a, alpha > 0
class GainFunction
{
public:
    enum class Family { Linear, Polynomial, Exponential };

    static GainFunction linear();
    static GainFunction polynomial(double p);
    static GainFunction exponential(double a, double alpha);

    Family family() const noexcept { return family_; }
    double p() const noexcept { return p_; }
    double a() const noexcept { return a_; }
    double alpha() const noexcept { return alpha_; }

    std::string describe() const;

    double eval(double t) const;
    double rate(double t) const;

    // d/dt [Upsilon(t)^power]
    double power_derivative(double t, double power) const;

    // Integral of Upsilon(s)^power over [t0, t].
    double power_integral(double t0, double t, double power) const;

    // Taylor coefficients c_k (k = 0..order) of Upsilon^power around t, so that
    // Upsilon(t + s)^power = sum_k c_k s^k.
    std::vector<double> power_series(double t, double power, int order) const;

private:
    GainFunction(Family family, double p, double a, double alpha)
        : family_(family), p_(p), a_(a), alpha_(alpha)
    {
    }

    Family family_;
    double p_ = 1.0;
    double a_ = 1.0;
    double alpha_ = 1.0;
};

// Free-function spellings of the three evaluations.
double upsilon_eval(const GainFunction& g, double t);
double upsilon_power_derivative(const GainFunction& g, double t, double power);
double upsilon_power_integral(const GainFunction& g, double t0, double t, double power);

}  // namespace safechain
