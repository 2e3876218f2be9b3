#include "safechain/taylor.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "safechain/error.hpp"

namespace safechain {

namespace {

void enumerate(int num_vars, int degree, int var, std::vector<int>& current, std::vector<std::vector<int>>& out)
{
    if (var == num_vars - 1) {
        current[var] = degree;
        out.push_back(current);
        current[var] = 0;
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current[var] = e;
        enumerate(num_vars, degree - e, var + 1, current, out);
    }
    current[var] = 0;
}

}  // namespace

std::shared_ptr<const TaylorSpace> TaylorSpace::get(int num_vars, int order)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const TaylorSpace>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{num_vars, order}];
    if (!slot)
        slot = std::make_shared<const TaylorSpace>(num_vars, order);
    return slot;
}

TaylorSpace::TaylorSpace(int num_vars, int order) : num_vars_(num_vars), order_(order)
{
    if (num_vars < 1 || order < 0)
        throw Error(ErrorKind::Domain, "taylor space needs num_vars >= 1 and order >= 0");

    std::vector<int> current(num_vars, 0);
    for (int d = 0; d <= order; ++d) {
        enumerate(num_vars, d, 0, current, exponents_);
        degree_end_.push_back(static_cast<int>(exponents_.size()));
    }
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < size(); ++i) {
        index[exponents_[i]] = i;
        degree_.push_back(std::accumulate(exponents_[i].begin(), exponents_[i].end(), 0));
    }

    // Products grouped by output degree so truncation is a prefix.
    std::vector<std::vector<Product>> by_degree(order + 1);
    std::vector<int> sum(num_vars);
    for (int a = 0; a < size(); ++a) {
        for (int b = 0; b < size(); ++b) {
            const int d = degree_[a] + degree_[b];
            if (d > order)
                continue;
            for (int v = 0; v < num_vars; ++v)
                sum[v] = exponents_[a][v] + exponents_[b][v];
            by_degree[d].push_back({a, b, index.at(sum)});
        }
    }
    for (const auto& group : by_degree) {
        products_.insert(products_.end(), group.begin(), group.end());
        products_end_.push_back(static_cast<int>(products_.size()));
    }

    derivative_.resize(num_vars);
    derivative_end_.resize(num_vars);
    for (int v = 0; v < num_vars; ++v) {
        std::vector<std::vector<DerivativeTerm>> grouped(order + 1);
        for (int a = 0; a < size(); ++a) {
            const int e = exponents_[a][v];
            if (e == 0)
                continue;
            auto lowered = exponents_[a];
            --lowered[v];
            grouped[degree_[a] - 1].push_back({a, index.at(lowered), static_cast<double>(e)});
        }
        for (const auto& group : grouped) {
            derivative_[v].insert(derivative_[v].end(), group.begin(), group.end());
            derivative_end_[v].push_back(static_cast<int>(derivative_[v].size()));
        }
    }
}

std::span<const TaylorSpace::Product> TaylorSpace::products(int d) const
{
    return {products_.data(), static_cast<std::size_t>(products_end_[d])};
}

std::span<const TaylorSpace::DerivativeTerm> TaylorSpace::derivative(int var, int d) const
{
    return {derivative_[var].data(), static_cast<std::size_t>(derivative_end_[var][d])};
}

Taylor::Taylor(std::shared_ptr<const TaylorSpace> space, int order)
    : space_(std::move(space)), c_(static_cast<std::size_t>(space_->size()), 0.0), order_(order)
{
}

Taylor Taylor::constant(std::shared_ptr<const TaylorSpace> space, double value)
{
    Taylor t(std::move(space), 0);
    t.order_ = t.space_->order();
    t.c_[0] = value;
    return t;
}

Taylor Taylor::variable(std::shared_ptr<const TaylorSpace> space, int var, double value)
{
    Taylor t = constant(std::move(space), value);
    if (var < 0 || var >= t.space_->num_vars())
        throw Error(ErrorKind::Domain, "taylor variable index out of range");
    if (t.order_ >= 1)
        t.c_[1 + var] = 1.0;
    return t;
}

double Taylor::partial(int var) const
{
    if (order_ < 1)
        throw Error(ErrorKind::Domain, "first partial requested from a degree-0 jet");
    return c_[1 + var];
}

void Taylor::check_space(const Taylor& other) const
{
    if (space_ != other.space_)
        throw Error(ErrorKind::Domain, "taylor operands live in different spaces");
}

Taylor Taylor::derivative(int var) const
{
    if (order_ < 1)
        throw Error(ErrorKind::Domain, "cannot differentiate a degree-0 jet");
    Taylor out(space_, order_ - 1);
    for (const auto& term : space_->derivative(var, order_ - 1))
        out.c_[term.dst] += term.factor * c_[term.src];
    return out;
}

Taylor Taylor::truncated(int order) const
{
    Taylor out = *this;
    if (order < out.order_) {
        out.order_ = order;
        std::fill(out.c_.begin() + space_->prefix(order), out.c_.end(), 0.0);
    }
    return out;
}

Taylor Taylor::operator-() const
{
    Taylor out = *this;
    for (double& c : out.c_)
        c = -c;
    return out;
}

Taylor& Taylor::operator+=(const Taylor& rhs)
{
    check_space(rhs);
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] += rhs.c_[i];
    if (rhs.order_ < order_)
        *this = truncated(rhs.order_);
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& rhs)
{
    check_space(rhs);
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] -= rhs.c_[i];
    if (rhs.order_ < order_)
        *this = truncated(rhs.order_);
    return *this;
}

Taylor& Taylor::operator*=(const Taylor& rhs)
{
    *this = *this * rhs;
    return *this;
}

Taylor& Taylor::operator+=(double rhs)
{
    c_[0] += rhs;
    return *this;
}

Taylor& Taylor::operator-=(double rhs)
{
    c_[0] -= rhs;
    return *this;
}

Taylor& Taylor::operator*=(double rhs)
{
    for (double& c : c_)
        c *= rhs;
    return *this;
}

Taylor operator*(const Taylor& lhs, const Taylor& rhs)
{
    lhs.check_space(rhs);
    Taylor out(lhs.space_, std::min(lhs.order_, rhs.order_));
    for (const auto& p : lhs.space_->products(out.order_))
        out.c_[p.out] += lhs.c_[p.lhs] * rhs.c_[p.rhs];
    return out;
}

Taylor operator/(const Taylor& lhs, const Taylor& rhs)
{
    return lhs * pow(rhs, -1.0);
}

Taylor compose(const Taylor& p, std::span<const double> coeffs)
{
    if (coeffs.empty())
        throw Error(ErrorKind::Domain, "compose needs at least one coefficient");
    Taylor shift = p - p.value();
    const int terms = std::min<int>(static_cast<int>(coeffs.size()) - 1, p.order());
    Taylor out = Taylor::constant(p.space(), coeffs[terms]).truncated(p.order());
    for (int k = terms - 1; k >= 0; --k) {
        out = out * shift;
        out += coeffs[k];
    }
    return out;
}

Taylor pow(const Taylor& p, double exponent)
{
    if (exponent >= 0.0 && exponent <= 64.0 && exponent == std::floor(exponent)) {
        // exact for integer powers, including at zero
        Taylor out = Taylor::constant(p.space(), 1.0).truncated(p.order());
        Taylor base = p;
        for (int e = static_cast<int>(exponent); e > 0; e >>= 1) {
            if (e & 1)
                out = out * base;
            if (e > 1)
                base = base * base;
        }
        return out;
    }
    const double x0 = p.value();
    if (x0 == 0.0)
        throw Error(ErrorKind::Numeric, "non-integer pow of a jet at zero");
    std::vector<double> c(static_cast<std::size_t>(p.order()) + 1);
    double binom = 1.0;
    for (int k = 0; k <= p.order(); ++k) {
        c[k] = binom * std::pow(x0, exponent - k);
        binom *= (exponent - k) / (k + 1);
    }
    return compose(p, c);
}

Taylor sqrt(const Taylor& p)
{
    if (!(p.value() > 0.0))
        throw Error(ErrorKind::Numeric, "sqrt of a jet needs a positive value");
    return pow(p, 0.5);
}

Taylor exp(const Taylor& p)
{
    std::vector<double> c(static_cast<std::size_t>(p.order()) + 1);
    double term = std::exp(p.value());
    for (int k = 0; k <= p.order(); ++k) {
        c[k] = term;
        term /= (k + 1);
    }
    return compose(p, c);
}

Taylor log(const Taylor& p)
{
    const double x0 = p.value();
    if (!(x0 > 0.0))
        throw Error(ErrorKind::Numeric, "log of a jet needs a positive value");
    std::vector<double> c(static_cast<std::size_t>(p.order()) + 1);
    c[0] = std::log(x0);
    for (int k = 1; k <= p.order(); ++k)
        c[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * std::pow(x0, k));
    return compose(p, c);
}

Taylor sin(const Taylor& p)
{
    const double s = std::sin(p.value());
    const double co = std::cos(p.value());
    std::vector<double> c(static_cast<std::size_t>(p.order()) + 1);
    double fact = 1.0;
    const double cycle[4] = {s, co, -s, -co};
    for (int k = 0; k <= p.order(); ++k) {
        if (k > 0)
            fact *= k;
        c[k] = cycle[k % 4] / fact;
    }
    return compose(p, c);
}

Taylor cos(const Taylor& p)
{
    const double s = std::sin(p.value());
    const double co = std::cos(p.value());
    std::vector<double> c(static_cast<std::size_t>(p.order()) + 1);
    double fact = 1.0;
    const double cycle[4] = {co, -s, -co, s};
    for (int k = 0; k <= p.order(); ++k) {
        if (k > 0)
            fact *= k;
        c[k] = cycle[k % 4] / fact;
    }
    return compose(p, c);
}

}  // namespace safechain
