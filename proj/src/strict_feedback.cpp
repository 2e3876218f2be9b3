#include "safechain/strict_feedback.hpp"

#include <cmath>

#include "safechain/error.hpp"

namespace safechain {

void validate(const StrictFeedbackModel& model)
{
    if (model.n < 1 || model.m < 1)
        throw Error(ErrorKind::Config, "strict-feedback model needs n >= 1 and m >= 1");
    if (!model.phi || !model.beta || !model.input_matrix)
        throw Error(ErrorKind::Config, "strict-feedback model '" + model.name + "' is missing evaluators");
    if (model.n > 1 && !model.beta_jac)
        throw Error(ErrorKind::Config, "strict-feedback model '" + model.name + "' needs beta Jacobians for n > 1");
    if (!model.chart && model.raw_dim != model.n * model.m)
        throw Error(ErrorKind::Config, "raw state must equal the stacked state when no chart is given");
    if (!(model.g_regularization >= 0.0))
        throw Error(ErrorKind::Config, "g_regularization must be >= 0");
}

Vec stacked_state(const StrictFeedbackModel& model, const Vec& raw)
{
    return model.chart ? model.chart(raw) : raw;
}

Vec beta_value(const StrictFeedbackModel& model, int i, const Vec& x)
{
    if (i == 0)
        return Vec::Zero(model.m);
    return model.beta(i, x);
}

Vec to_transformed(const StrictFeedbackModel& model, const Vec& raw)
{
    const Vec x = stacked_state(model, raw);
    Vec out(model.n * model.m);
    for (int i = 1; i <= model.n; ++i)
        set_block(out, i, model.m, block(x, i, model.m) - beta_value(model, i - 1, x));
    return out;
}

Vec from_transformed(const StrictFeedbackModel& model, const Vec& transformed)
{
    // Blocks above i are still zero when beta_{i-1} is evaluated; it only reads xbar_{i-1}.
    Vec x = Vec::Zero(model.n * model.m);
    for (int i = 1; i <= model.n; ++i)
        set_block(x, i, model.m, block(transformed, i, model.m) + beta_value(model, i - 1, x));
    return x;
}

namespace {

struct RegularizedFactor {
    Mat q;
    Mat r;
};

RegularizedFactor regularized_factor(const StrictFeedbackModel& model, const Vec& raw)
{
    const Mat g = model.input_matrix(raw);
    const int m = model.m;
    if (g.rows() != m || g.cols() != m)
        throw Error(ErrorKind::Domain, "input matrix has wrong shape");
    if (!g.allFinite())
        throw Error(ErrorKind::SingularInputMatrix, "input matrix has non-finite entries");

    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(m, m);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();

    // Leading pivots nonnegative, Q a proper rotation; the last pivot then has the sign of det(G).
    for (int i = 0; i + 1 < m; ++i) {
        if (r(i, i) < 0.0) {
            q.col(i) *= -1.0;
            r.row(i) *= -1.0;
            q.col(m - 1) *= -1.0;
            r.row(m - 1) *= -1.0;
        }
    }
    if (q.determinant() < 0.0) {
        q.col(m - 1) *= -1.0;
        r.row(m - 1) *= -1.0;
    }

    const double eps = model.g_regularization;
    for (int i = 0; i < m; ++i) {
        const double pivot = r(i, i);
        if (std::abs(pivot) < eps)
            r(i, i) = std::signbit(pivot) && pivot != 0.0 ? -eps : eps;
        if (r(i, i) == 0.0)
            throw Error(ErrorKind::SingularInputMatrix, "input matrix is singular and regularization is disabled");
    }
    return {q, r};
}

}  // namespace

Mat regularized_input_matrix(const StrictFeedbackModel& model, const Vec& raw)
{
    const auto f = regularized_factor(model, raw);
    return f.q * f.r;
}

Vec input_from_virtual(const StrictFeedbackModel& model, const Vec& raw, const Vec& v)
{
    const auto f = regularized_factor(model, raw);
    const Vec x = stacked_state(model, raw);
    const Vec rhs = f.q.transpose() * (v + beta_value(model, model.n, x));
    Vec u = f.r.triangularView<Eigen::Upper>().solve(rhs);
    if (!u.allFinite())
        throw Error(ErrorKind::SingularInputMatrix, "input transformation produced non-finite input");
    return u;
}

Vec nominal_to_virtual(const StrictFeedbackModel& model, const Vec& raw, const Vec& u_no)
{
    const Vec x = stacked_state(model, raw);
    return model.input_matrix(raw) * u_no - beta_value(model, model.n, x);
}

std::vector<Vec> residual_disturbance(const StrictFeedbackModel& model, const Vec& raw,
                                      const std::vector<Vec>& d_values)
{
    if (static_cast<int>(d_values.size()) != model.n)
        throw Error(ErrorKind::Domain, "residual_disturbance needs one disturbance block per level");
    const Vec x = stacked_state(model, raw);
    std::vector<Vec> w(d_values);
    for (int i = 2; i <= model.n; ++i)
        for (int k = 1; k < i; ++k)
            w[i - 1] -= model.beta_jac(i - 1, k, x) * d_values[k - 1];
    return w;
}

double beta_consistency_check(const StrictFeedbackModel& model, const Vec& raw, double fd_step)
{
    if (!(fd_step > 0.0))
        throw Error(ErrorKind::Domain, "fd_step must be positive");
    const int m = model.m;
    const Vec x = stacked_state(model, raw);
    double worst = 0.0;
    for (int i = 1; i <= model.n; ++i) {
        Vec residual = beta_value(model, i, x) + model.phi(i, x);
        for (int k = 1; k < i; ++k) {
            Mat jac(m, m);
            for (int c = 0; c < m; ++c) {
                Vec hi = x;
                Vec lo = x;
                hi((k - 1) * m + c) += fd_step;
                lo((k - 1) * m + c) -= fd_step;
                jac.col(c) = (beta_value(model, i - 1, hi) - beta_value(model, i - 1, lo)) / (2.0 * fd_step);
            }
            residual -= jac * (block(x, k + 1, m) + model.phi(k, x));
        }
        worst = std::max(worst, residual.norm());
    }
    return worst;
}

Vec original_rhs(const StrictFeedbackModel& model, const Vec& raw, const Vec& u,
                 const std::vector<Vec>& d_values, double /*t*/)
{
    if (static_cast<int>(d_values.size()) != model.n)
        throw Error(ErrorKind::Domain, "original_rhs needs one disturbance block per level");
    const int m = model.m;
    const Vec x = stacked_state(model, raw);
    Vec dx(model.n * m);
    for (int i = 1; i < model.n; ++i)
        set_block(dx, i, m, block(x, i + 1, m) + model.phi(i, x) + d_values[i - 1]);
    set_block(dx, model.n, m, model.input_matrix(raw) * u + model.phi(model.n, x) + d_values[model.n - 1]);
    return dx;
}

StrictFeedbackModel worked_example_model()
{
    StrictFeedbackModel model;
    model.name = "worked_example_n3";
    model.n = 3;
    model.m = 1;
    model.raw_dim = 3;
    model.phi = [](int i, const Vec& x) {
        Vec out(1);
        switch (i) {
        case 1: out(0) = x(0) * x(0); break;
        case 2: out(0) = x(0) * x(0) + x(1) * x(1); break;
        default: out(0) = 0.0; break;
        }
        return out;
    };
    model.beta = [](int i, const Vec& x) {
        const double x1 = x(0), x2 = x(1), x3 = x(2);
        Vec out(1);
        switch (i) {
        case 1: out(0) = -x1 * x1; break;
        case 2: out(0) = -x1 * x1 - x2 * x2 - 2.0 * x1 * x2 - 2.0 * x1 * x1 * x1; break;
        default:
            out(0) = (-2.0 * x1 - 2.0 * x2 - 6.0 * x1 * x1) * (x2 + x1 * x1)
                + (-2.0 * x2 - 2.0 * x1) * (x3 + x1 * x1 + x2 * x2);
            break;
        }
        return out;
    };
    model.beta_jac = [](int i, int k, const Vec& x) {
        const double x1 = x(0), x2 = x(1);
        Mat out = Mat::Zero(1, 1);
        if (i == 1 && k == 1)
            out(0, 0) = -2.0 * x1;
        else if (i == 2 && k == 1)
            out(0, 0) = -2.0 * x1 - 2.0 * x2 - 6.0 * x1 * x1;
        else if (i == 2 && k == 2)
            out(0, 0) = -2.0 * x2 - 2.0 * x1;
        else
            throw Error(ErrorKind::Domain, "worked example provides beta Jacobians only up to beta_2");
        return out;
    };
    model.input_matrix = [](const Vec&) { return Mat::Identity(1, 1); };
    return model;
}

StrictFeedbackModel vehicle_chain_model()
{
    // raw state (x, y, v, theta); stacked state (x, y, v cos theta, v sin theta)
    StrictFeedbackModel model;
    model.name = "vehicle_chain_n2";
    model.n = 2;
    model.m = 2;
    model.raw_dim = 4;
    model.chart = [](const Vec& s) {
        Vec x(4);
        x << s(0), s(1), s(2) * std::cos(s(3)), s(2) * std::sin(s(3));
        return x;
    };
    model.phi = [](int, const Vec&) { return Vec::Zero(2).eval(); };
    model.beta = [](int, const Vec&) { return Vec::Zero(2).eval(); };
    model.beta_jac = [](int, int, const Vec&) { return Mat::Zero(2, 2).eval(); };
    model.input_matrix = [](const Vec& s) {
        const double v = s(2), c = std::cos(s(3)), sn = std::sin(s(3));
        Mat g(2, 2);
        g << c, -v * sn, sn, v * c;
        return g;
    };
    return model;
}

StrictFeedbackModel make_model(const std::string& key)
{
    if (key == "worked_example_n3")
        return worked_example_model();
    if (key == "vehicle_chain_n2")
        return vehicle_chain_model();
    throw Error(ErrorKind::Config, "unknown model '" + key + "'");
}

}  // namespace safechain
