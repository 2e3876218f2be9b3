#pragma once

#include <memory>
#include <span>
#include <vector>

namespace safechain {

// Monomial bookkeeping for truncated multivariate Taylor polynomials in
// `num_vars` variables up to total degree `order`. Monomials are stored in
// graded order: index 0 is the constant, 1..num_vars are the linear terms.
// Spaces are immutable and shared; get() caches one instance per shape.
class TaylorSpace
{
public:
    struct Product {
        int lhs;
        int rhs;
        int out;
    };
    struct DerivativeTerm {
        int src;
        int dst;
        double factor;
    };

    static std::shared_ptr<const TaylorSpace> get(int num_vars, int order);

    TaylorSpace(int num_vars, int order);

    int num_vars() const noexcept { return num_vars_; }
    int order() const noexcept { return order_; }
    int size() const noexcept { return static_cast<int>(exponents_.size()); }
    int degree(int idx) const { return degree_[idx]; }
    // Number of leading monomials with degree <= d.
    int prefix(int d) const { return degree_end_[d]; }

    // Product terms whose output degree is <= d.
    std::span<const Product> products(int d) const;
    // d/dz_var: terms whose destination degree is <= d.
    std::span<const DerivativeTerm> derivative(int var, int d) const;

    const std::vector<int>& exponents(int idx) const { return exponents_[idx]; }

private:
    int num_vars_;
    int order_;
    std::vector<std::vector<int>> exponents_;
    std::vector<int> degree_;
    std::vector<int> degree_end_;
    std::vector<Product> products_;
    std::vector<int> products_end_;
    std::vector<std::vector<DerivativeTerm>> derivative_;
    std::vector<std::vector<int>> derivative_end_;
};

// Forward-mode jet: a truncated multivariate Taylor polynomial around an
// evaluation point. Coefficients are c_a = (d^a f)(z0) / a!. The valid
// truncation degree shrinks by one under differentiation and combines as the
// minimum under arithmetic.
class Taylor
{
public:
    Taylor() = default;

    static Taylor constant(std::shared_ptr<const TaylorSpace> space, double value);
    static Taylor variable(std::shared_ptr<const TaylorSpace> space, int var, double value);

    const std::shared_ptr<const TaylorSpace>& space() const noexcept { return space_; }
    int order() const noexcept { return order_; }
    double value() const { return c_[0]; }
    // First partial derivative with respect to variable `var`.
    double partial(int var) const;
    double coeff(int idx) const { return c_[idx]; }

    Taylor derivative(int var) const;
    Taylor truncated(int order) const;

    Taylor operator-() const;
    Taylor& operator+=(const Taylor& rhs);
    Taylor& operator-=(const Taylor& rhs);
    Taylor& operator*=(const Taylor& rhs);
    Taylor& operator+=(double rhs);
    Taylor& operator-=(double rhs);
    Taylor& operator*=(double rhs);

    friend Taylor operator+(Taylor lhs, const Taylor& rhs) { return lhs += rhs; }
    friend Taylor operator-(Taylor lhs, const Taylor& rhs) { return lhs -= rhs; }
    friend Taylor operator*(const Taylor& lhs, const Taylor& rhs);
    friend Taylor operator/(const Taylor& lhs, const Taylor& rhs);
    friend Taylor operator+(Taylor lhs, double rhs) { return lhs += rhs; }
    friend Taylor operator-(Taylor lhs, double rhs) { return lhs -= rhs; }
    friend Taylor operator*(Taylor lhs, double rhs) { return lhs *= rhs; }
    friend Taylor operator/(Taylor lhs, double rhs) { return lhs *= 1.0 / rhs; }
    friend Taylor operator+(double lhs, Taylor rhs) { return rhs += lhs; }
    friend Taylor operator-(double lhs, const Taylor& rhs) { return -rhs + lhs; }
    friend Taylor operator*(double lhs, Taylor rhs) { return rhs *= lhs; }

private:
    Taylor(std::shared_ptr<const TaylorSpace> space, int order);
    void check_space(const Taylor& other) const;

    std::shared_ptr<const TaylorSpace> space_;
    std::vector<double> c_;
    int order_ = 0;
};

// f(P) where coeffs[k] are the Taylor coefficients of f around P.value().
Taylor compose(const Taylor& p, std::span<const double> coeffs);

Taylor sqrt(const Taylor& p);
Taylor exp(const Taylor& p);
Taylor log(const Taylor& p);
Taylor sin(const Taylor& p);
Taylor cos(const Taylor& p);
Taylor pow(const Taylor& p, double exponent);

}  // namespace safechain
