#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msde/mat.hpp"

namespace msde {

enum class SetKind { Box, Ball, HalfSpace };

// Convex sets with an exact Euclidean projection. Only families whose
// projection is closed-form are admitted, so the constraint step of the
// simulator carries no iteration error.
class ConvexSet {
public:
    static ConvexSet box(std::vector<double> lower, std::vector<double> upper);
    static ConvexSet ball(std::vector<double> center, double radius);
    // {x : <normal, x> <= offset}
    static ConvexSet half_space(std::vector<double> normal, double offset);

    SetKind kind() const { return kind_; }
    int dim() const { return dim_; }

    void project(std::span<const double> x, std::span<double> out) const;
    bool contains(std::span<const double> x, double tol = 1e-9) const;
    // A point strictly inside the set; existence is enforced at construction.
    std::vector<double> interior_point() const;
    bool is_bounded() const;

    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<double>& center() const { return center_; }
    double radius() const { return radius_; }
    const std::vector<double>& normal() const { return normal_; }
    double offset() const { return offset_; }

private:
    ConvexSet() = default;
    SetKind kind_ = SetKind::Box;
    int dim_ = 0;
    std::vector<double> lower_, upper_;      // Box
    std::vector<double> center_;             // Ball
    double radius_ = 0.0;
    std::vector<double> normal_;             // HalfSpace
    double offset_ = 0.0;
    double normal_sq_ = 0.0;
};

enum class OperatorKind { Zero, LinearPsd, NormalCone, SubdiffPower };

// Maximal monotone operators on R^d with exact resolvents. The resolvent
// (I + lambda A)^{-1} is the primitive; the Yosida approximation and the
// minimal section derive from it or have closed forms per family.
class Operator {
public:
    static Operator zero(int dim);
    // Requires M + M^T positive semidefinite.
    static Operator linear_psd(Mat m);
    static Operator normal_cone(ConvexSet set);
    // A = subdifferential of phi(x) = coeff * |x|^exponent / exponent, exponent >= 1.
    static Operator subdiff_power(int dim, double coeff, double exponent);

    OperatorKind kind() const { return kind_; }
    int dim() const { return dim_; }

    // J_lambda(x): the unique z with x in z + lambda A(z). lambda > 0.
    void resolvent(double lambda, std::span<const double> x, std::span<double> out) const;
    // A_lambda(x) = (x - J_lambda(x)) / lambda
    void yosida(double lambda, std::span<const double> x, std::span<double> out) const;
    // Least-norm element of A(x); x must be in D(A).
    void minimal_section(std::span<const double> x, std::span<double> out) const;
    // Euclidean projection onto cl D(A); the identity when D(A) = R^d.
    void project_domain(std::span<const double> x, std::span<double> out) const;

    bool in_domain(std::span<const double> x, double tol = 1e-9) const;
    bool domain_is_whole_space() const { return kind_ != OperatorKind::NormalCone; }
    const ConvexSet* constraint_set() const {
        return kind_ == OperatorKind::NormalCone ? &*set_ : nullptr;
    }
    const Mat& matrix() const { return m_; }
    double power_coeff() const { return coeff_; }
    double power_exponent() const { return exponent_; }
    std::string describe() const;

    // Vector-returning conveniences for tests and cold paths.
    std::vector<double> resolvent(double lambda, std::span<const double> x) const;
    std::vector<double> yosida(double lambda, std::span<const double> x) const;
    std::vector<double> minimal_section(std::span<const double> x) const;
    std::vector<double> project_domain(std::span<const double> x) const;

private:
    Operator() = default;
    OperatorKind kind_ = OperatorKind::Zero;
    int dim_ = 0;
    Mat m_;                    // LinearPsd
    Mat resolvent_cache_;      // (I + lambda M)^{-1} for the cached lambda
    double cached_lambda_ = -1.0;
    std::optional<ConvexSet> set_;
    double coeff_ = 0.0;       // SubdiffPower
    double exponent_ = 0.0;

    friend class PreparedResolvent;
};

// Resolvent with lambda fixed up front; what the simulator uses per step.
// For LinearPsd the matrix (I + lambda M)^{-1} is factored once here.
class PreparedResolvent {
public:
    PreparedResolvent(const Operator& op, double lambda);
    void apply(std::span<const double> x, std::span<double> out) const;
    double lambda() const { return lambda_; }

private:
    const Operator* op_;
    double lambda_;
    Mat inv_;  // only for LinearPsd
};

// Root of s + lambda*c*s^(q-1) = r on [0, r]; the radial part of the
// SubdiffPower resolvent. Exposed for direct testing.
double subdiff_power_radial(double lambda, double coeff, double exponent, double r);

} // namespace msde
