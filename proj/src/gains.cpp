#include "safechain/gains.hpp"

#include <cmath>
#include <sstream>

#include "safechain/error.hpp"

namespace safechain {

namespace {

void require_time(double t)
{
    if (!(t >= 0.0))
        throw Error(ErrorKind::Domain, "gain function evaluated at negative time t=" + std::to_string(t));
}

// Exponent e such that Upsilon^power = (1+t)^e for the power-law families.
double power_law_exponent(const GainFunction& g, double power)
{
    return g.family() == GainFunction::Family::Linear ? power : g.p() * power;
}

}  // namespace

GainFunction GainFunction::linear()
{
    return GainFunction(Family::Linear, 1.0, 1.0, 1.0);
}

GainFunction GainFunction::polynomial(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw Error(ErrorKind::Config, "polynomial gain requires p >= 1, got " + std::to_string(p));
    return GainFunction(Family::Polynomial, p, 1.0, 1.0);
}

GainFunction GainFunction::exponential(double a, double alpha)
{
    if (!(a > 0.0) || !(alpha > 0.0) || !std::isfinite(a) || !std::isfinite(alpha))
        throw Error(ErrorKind::Config, "exponential gain requires a > 0 and alpha > 0");
    return GainFunction(Family::Exponential, 1.0, a, alpha);
}

std::string GainFunction::describe() const
{
    std::ostringstream os;
    switch (family_) {
    case Family::Linear: os << "linear(1+t)"; break;
    case Family::Polynomial: os << "polynomial((1+t)^" << p_ << ")"; break;
    case Family::Exponential: os << "exponential(" << a_ << "*exp(" << alpha_ << "t))"; break;
    }
    return os.str();
}

double GainFunction::eval(double t) const
{
    require_time(t);
    switch (family_) {
    case Family::Linear: return 1.0 + t;
    case Family::Polynomial: return std::pow(1.0 + t, p_);
    case Family::Exponential: return a_ * std::exp(alpha_ * t);
    }
    return 0.0;
}

double GainFunction::rate(double t) const
{
    require_time(t);
    switch (family_) {
    case Family::Linear: return 1.0;
    case Family::Polynomial: return p_ * std::pow(1.0 + t, p_ - 1.0);
    case Family::Exponential: return alpha_ * a_ * std::exp(alpha_ * t);
    }
    return 0.0;
}

double GainFunction::power_derivative(double t, double power) const
{
    return power * std::pow(eval(t), power - 1.0) * rate(t);
}

double GainFunction::power_integral(double t0, double t, double power) const
{
    require_time(t0);
    if (t < t0)
        throw Error(ErrorKind::Domain, "gain integral needs t >= t0");
    if (t == t0)
        return 0.0;
    if (family_ == Family::Exponential) {
        const double k = power * alpha_;
        // a^q (e^{k t} - e^{k t0}) / k, written to keep precision for short spans
        return std::pow(a_, power) * std::exp(k * t0) * std::expm1(k * (t - t0)) / k;
    }
    const double e1 = power_law_exponent(*this, power) + 1.0;
    return (std::pow(1.0 + t, e1) - std::pow(1.0 + t0, e1)) / e1;
}

std::vector<double> GainFunction::power_series(double t, double power, int order) const
{
    require_time(t);
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    if (family_ == Family::Exponential) {
        const double k = power * alpha_;
        double term = std::pow(a_, power) * std::exp(k * t);
        for (int j = 0; j <= order; ++j) {
            c[j] = term;
            term *= k / (j + 1);
        }
        return c;
    }
    // (1 + t + s)^e = sum_j binom(e, j) (1+t)^{e-j} s^j
    const double e = power_law_exponent(*this, power);
    const double base = 1.0 + t;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        c[j] = binom * std::pow(base, e - j);
        binom *= (e - j) / (j + 1);
    }
    return c;
}

double upsilon_eval(const GainFunction& g, double t)
{
    return g.eval(t);
}

double upsilon_power_derivative(const GainFunction& g, double t, double power)
{
    return g.power_derivative(t, power);
}

double upsilon_power_integral(const GainFunction& g, double t0, double t, double power)
{
    return g.power_integral(t0, t, power);
}

}  // namespace safechain
