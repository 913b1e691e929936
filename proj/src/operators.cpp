#include "msde/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd to_eigen(const Mat& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m.at(i, j);
    return e;
}

Mat from_eigen(const Eigen::MatrixXd& e) {
    Mat m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = e(i, j);
    return m;
}

} // namespace

// ---------------------------------------------------------------- ConvexSet

ConvexSet ConvexSet::box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("box: lower/upper must be nonempty and equal length");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (std::isnan(lower[i]) || std::isnan(upper[i]))
            throw std::invalid_argument("box: NaN bound");
        if (lower[i] > upper[i])
            throw std::invalid_argument("box: empty (lower > upper)");
        if (lower[i] >= upper[i])
            throw std::invalid_argument("box: empty interior (lower == upper)");
    }
    ConvexSet s;
    s.kind_ = SetKind::Box;
    s.dim_ = static_cast<int>(lower.size());
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
}

ConvexSet ConvexSet::ball(std::vector<double> center, double radius) {
    if (center.empty()) throw std::invalid_argument("ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be > 0");
    ConvexSet s;
    s.kind_ = SetKind::Ball;
    s.dim_ = static_cast<int>(center.size());
    s.center_ = std::move(center);
    s.radius_ = radius;
    return s;
}

ConvexSet ConvexSet::half_space(std::vector<double> normal, double offset) {
    if (normal.empty()) throw std::invalid_argument("half_space: empty normal");
    double nsq = norm2_sq(normal);
    if (!(nsq > 0.0)) throw std::invalid_argument("half_space: zero normal");
    ConvexSet s;
    s.kind_ = SetKind::HalfSpace;
    s.dim_ = static_cast<int>(normal.size());
    s.normal_ = std::move(normal);
    s.offset_ = offset;
    s.normal_sq_ = nsq;
    return s;
}

void ConvexSet::project(std::span<const double> x, std::span<double> out) const {
    switch (kind_) {
    case SetKind::Box:
        for (int i = 0; i < dim_; ++i)
            out[i] = std::min(std::max(x[i], lower_[i]), upper_[i]);
        return;
    case SetKind::Ball: {
        double d2 = 0.0;
        for (int i = 0; i < dim_; ++i) d2 += sqr(x[i] - center_[i]);
        if (d2 <= radius_ * radius_) {
            std::copy(x.begin(), x.end(), out.begin());
        } else {
            double scale = radius_ / std::sqrt(d2);
            for (int i = 0; i < dim_; ++i)
                out[i] = center_[i] + scale * (x[i] - center_[i]);
        }
        return;
    }
    case SetKind::HalfSpace: {
        double v = dot(normal_, x) - offset_;
        if (v <= 0.0) {
            std::copy(x.begin(), x.end(), out.begin());
        } else {
            double scale = v / normal_sq_;
            for (int i = 0; i < dim_; ++i) out[i] = x[i] - scale * normal_[i];
        }
        return;
    }
    }
}

bool ConvexSet::contains(std::span<const double> x, double tol) const {
    switch (kind_) {
    case SetKind::Box:
        for (int i = 0; i < dim_; ++i)
            if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
        return true;
    case SetKind::Ball: {
        double d2 = 0.0;
        for (int i = 0; i < dim_; ++i) d2 += sqr(x[i] - center_[i]);
        return std::sqrt(d2) <= radius_ + tol;
    }
    case SetKind::HalfSpace:
        return dot(normal_, x) <= offset_ + tol * std::sqrt(normal_sq_);
    }
    return false;
}

std::vector<double> ConvexSet::interior_point() const {
    std::vector<double> p(dim_, 0.0);
    switch (kind_) {
    case SetKind::Box:
        for (int i = 0; i < dim_; ++i) {
            bool lf = std::isfinite(lower_[i]), uf = std::isfinite(upper_[i]);
            if (lf && uf) p[i] = 0.5 * (lower_[i] + upper_[i]);
            else if (lf) p[i] = lower_[i] + 1.0;
            else if (uf) p[i] = upper_[i] - 1.0;
            else p[i] = 0.0;
        }
        return p;
    case SetKind::Ball:
        return center_;
    case SetKind::HalfSpace: {
        double scale = (offset_ - std::sqrt(normal_sq_)) / normal_sq_;
        for (int i = 0; i < dim_; ++i) p[i] = scale * normal_[i];
        return p;
    }
    }
    return p;
}

bool ConvexSet::is_bounded() const {
    switch (kind_) {
    case SetKind::Box:
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) return false;
        return true;
    case SetKind::Ball: return true;
    case SetKind::HalfSpace: return false;
    }
    return false;
}

// ----------------------------------------------------------------- Operator

Operator Operator::zero(int dim) {
    if (dim < 1) throw std::invalid_argument("operator: dim must be >= 1");
    Operator op;
    op.kind_ = OperatorKind::Zero;
    op.dim_ = dim;
    return op;
}

Operator Operator::linear_psd(Mat m) {
    if (m.rows < 1 || m.rows != m.cols)
        throw std::invalid_argument("linear_psd: matrix must be square");
    Eigen::MatrixXd e = to_eigen(m);
    Eigen::MatrixXd sym = 0.5 * (e + e.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
        throw std::invalid_argument("linear_psd: M + M^T is not positive semidefinite");
    Operator op;
    op.kind_ = OperatorKind::LinearPsd;
    op.dim_ = m.rows;
    op.m_ = std::move(m);
    return op;
}

Operator Operator::normal_cone(ConvexSet set) {
    Operator op;
    op.kind_ = OperatorKind::NormalCone;
    op.dim_ = set.dim();
    op.set_ = std::move(set);
    return op;
}

Operator Operator::subdiff_power(int dim, double coeff, double exponent) {
    if (dim < 1) throw std::invalid_argument("operator: dim must be >= 1");
    if (!(coeff > 0.0)) throw std::invalid_argument("subdiff_power: coeff must be > 0");
    if (!(exponent >= 1.0)) throw std::invalid_argument("subdiff_power: exponent must be >= 1");
    Operator op;
    op.kind_ = OperatorKind::SubdiffPower;
    op.dim_ = dim;
    op.coeff_ = coeff;
    op.exponent_ = exponent;
    return op;
}

double subdiff_power_radial(double lambda, double coeff, double exponent, double r) {
    if (r <= 0.0) return 0.0;
    const double lc = lambda * coeff;
    if (exponent == 1.0) return std::max(0.0, r - lc);
    if (exponent == 2.0) return r / (1.0 + lc);
    // g(s) = s + lc*s^(q-1) is strictly increasing on [0, r] with g(0)=0,
    // g(r) >= r, so the root is unique; safeguarded Newton with a bisection
    // bracket converges for every q >= 1.
    double lo = 0.0, hi = r;
    double s = r / (1.0 + lc * std::pow(r, exponent - 2.0));
    if (!(s > lo && s < hi)) s = 0.5 * r;
    for (int it = 0; it < 200; ++it) {
        double sp = std::pow(s, exponent - 2.0);
        double g = s + lc * sp * s - r;
        if (std::abs(g) <= 1e-13 * (1.0 + r)) return s;
        if (g > 0.0) hi = s; else lo = s;
        double dg = 1.0 + lc * (exponent - 1.0) * sp;
        double step = g / dg;
        double next = s - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

void Operator::resolvent(double lambda, std::span<const double> x,
                         std::span<double> out) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("resolvent: lambda must be > 0");
    switch (kind_) {
    case OperatorKind::Zero:
        std::copy(x.begin(), x.end(), out.begin());
        return;
    case OperatorKind::LinearPsd: {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim_, dim_) + lambda * to_eigen(m_);
        Eigen::VectorXd b(dim_);
        for (int i = 0; i < dim_; ++i) b(i) = x[i];
        Eigen::VectorXd z = a.partialPivLu().solve(b);
        for (int i = 0; i < dim_; ++i) out[i] = z(i);
        return;
    }
    case OperatorKind::NormalCone:
        // projection for every lambda > 0
        set_->project(x, out);
        return;
    case OperatorKind::SubdiffPower: {
        double r = norm2(x);
        double s = subdiff_power_radial(lambda, coeff_, exponent_, r);
        double scale = r > 0.0 ? s / r : 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
        return;
    }
    }
}

void Operator::yosida(double lambda, std::span<const double> x,
                      std::span<double> out) const {
    resolvent(lambda, x, out);
    double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - out[i]) * inv;
}

void Operator::minimal_section(std::span<const double> x, std::span<double> out) const {
    if (!in_domain(x))
        throw std::domain_error("minimal_section: x outside D(A)");
    switch (kind_) {
    case OperatorKind::Zero:
        std::fill(out.begin(), out.end(), 0.0);
        return;
    case OperatorKind::LinearPsd:
        m_.apply(x, out);
        return;
    case OperatorKind::NormalCone:
        // 0 is in the normal cone at every point of C
        std::fill(out.begin(), out.end(), 0.0);
        return;
    case OperatorKind::SubdiffPower: {
        double r = norm2(x);
        if (r == 0.0) {
            // least-norm subgradient at the origin is 0 for every q >= 1
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        double scale = coeff_ * std::pow(r, exponent_ - 2.0);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
        return;
    }
    }
}

void Operator::project_domain(std::span<const double> x, std::span<double> out) const {
    if (kind_ == OperatorKind::NormalCone) set_->project(x, out);
    else std::copy(x.begin(), x.end(), out.begin());
}

bool Operator::in_domain(std::span<const double> x, double tol) const {
    return kind_ != OperatorKind::NormalCone || set_->contains(x, tol);
}

std::string Operator::describe() const {
    switch (kind_) {
    case OperatorKind::Zero: return "zero";
    case OperatorKind::LinearPsd: return "linear_psd";
    case OperatorKind::NormalCone:
        switch (set_->kind()) {
        case SetKind::Box: return "normal_cone(box)";
        case SetKind::Ball: return "normal_cone(ball)";
        case SetKind::HalfSpace: return "normal_cone(half_space)";
        }
        return "normal_cone";
    case OperatorKind::SubdiffPower: return "subdiff_power";
    }
    return "?";
}

std::vector<double> Operator::resolvent(double lambda, std::span<const double> x) const {
    std::vector<double> out(x.size());
    resolvent(lambda, x, out);
    return out;
}

std::vector<double> Operator::yosida(double lambda, std::span<const double> x) const {
    std::vector<double> out(x.size());
    yosida(lambda, x, out);
    return out;
}

std::vector<double> Operator::minimal_section(std::span<const double> x) const {
    std::vector<double> out(x.size());
    minimal_section(x, out);
    return out;
}

std::vector<double> Operator::project_domain(std::span<const double> x) const {
    std::vector<double> out(x.size());
    project_domain(x, out);
    return out;
}

// -------------------------------------------------------- PreparedResolvent

PreparedResolvent::PreparedResolvent(const Operator& op, double lambda)
    : op_(&op), lambda_(lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("resolvent: lambda must be > 0");
    if (op.kind() == OperatorKind::LinearPsd) {
        Eigen::MatrixXd a =
            Eigen::MatrixXd::Identity(op.dim(), op.dim()) + lambda * to_eigen(op.matrix());
        inv_ = from_eigen(a.partialPivLu().inverse());
    }
}

void PreparedResolvent::apply(std::span<const double> x, std::span<double> out) const {
    switch (op_->kind()) {
    case OperatorKind::Zero:
        std::copy(x.begin(), x.end(), out.begin());
        return;
    case OperatorKind::LinearPsd:
        inv_.apply(x, out);
        return;
    default:
        op_->resolvent(lambda_, x, out);
        return;
    }
}

} // namespace msde
