#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dcopt {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Tolerances shared across the library. Desk-scale double precision.
namespace tol {
inline constexpr double kDedup = 1e-9;    // vertex dedup distance
inline constexpr double kPrune = 1e-9;    // prune-LP feasibility
inline constexpr double kLp = 1e-9;       // simplex feasibility / reduced costs
inline constexpr double kMinNorm = 1e-10; // Wolfe stopping test (relative)
inline constexpr double kRidge = 1e-12;   // Gram regularization on singular affine solves
inline constexpr double kSupport = 1e-8;  // support-set verdict separation
inline constexpr double kOpt = 1e-8;      // optimality threshold on a(z)
inline constexpr double kFeas = 1e-8;     // feasibility of a candidate point
} // namespace tol

// Vertex-count threshold above which combining operations prune automatically.
inline constexpr Index kAutoPruneThreshold = 64;

/// The affine function x -> a + <v, x> identified with the point (a, v).
template <typename Scalar>
struct SupportPoint {
  Scalar a{};
  VectorX<Scalar> v;

  SupportPoint() = default;
  SupportPoint(Scalar intercept, VectorX<Scalar> slope)
      : a(intercept), v(std::move(slope)) {}
  SupportPoint(Scalar intercept, std::initializer_list<Scalar> slope)
      : a(intercept), v(VectorX<Scalar>(static_cast<Index>(slope.size()))) {
    Index i = 0;
    for (Scalar s : slope) v[i++] = s;
  }

  Index dim() const { return v.size(); }

  /// (a, v) stacked as one vector in R^{1+d}.
  VectorX<Scalar> lifted() const {
    VectorX<Scalar> p(1 + v.size());
    p[0] = a;
    p.tail(v.size()) = v;
    return p;
  }

  static SupportPoint from_lifted(const VectorX<Scalar>& p) {
    return SupportPoint(p[0], p.tail(p.size() - 1));
  }

  Scalar value_at(const VectorX<Scalar>& x) const { return a + v.dot(x); }
};

template <typename Scalar>
bool lex_less(const SupportPoint<Scalar>& lhs, const SupportPoint<Scalar>& rhs) {
  if (lhs.a != rhs.a) return lhs.a < rhs.a;
  for (Index i = 0; i < lhs.v.size(); ++i)
    if (lhs.v[i] != rhs.v[i]) return lhs.v[i] < rhs.v[i];
  return false;
}

/// Convex polytope in R^{1+d} given by its vertex list. Columns of the lifted
/// matrix are the points (a_k; v_k). The set is conv of the columns; the
/// vertex list is allowed to contain non-extreme points until pruned.
template <typename Scalar>
class Polytope {
 public:
  /// lifted: (1+d) x n, one column per vertex, row 0 the intercepts.
  explicit Polytope(MatrixX<Scalar> lifted) : pts_(std::move(lifted)) {
    if (pts_.cols() == 0) throw std::invalid_argument("Polytope: empty vertex list");
    if (pts_.rows() < 2) throw std::invalid_argument("Polytope: slope dimension must be >= 1");
    if (!pts_.allFinite()) throw std::invalid_argument("Polytope: non-finite vertex coordinate");
  }

  Polytope(std::initializer_list<SupportPoint<Scalar>> vertices)
      : Polytope(std::vector<SupportPoint<Scalar>>(vertices)) {}

  explicit Polytope(const std::vector<SupportPoint<Scalar>>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("Polytope: empty vertex list");
    const Index d = vertices.front().dim();
    pts_.resize(1 + d, static_cast<Index>(vertices.size()));
    for (Index k = 0; k < pts_.cols(); ++k) {
      const auto& p = vertices[static_cast<std::size_t>(k)];
      if (p.dim() != d) throw std::invalid_argument("Polytope: inconsistent vertex dimensions");
      pts_(0, k) = p.a;
      pts_.col(k).tail(d) = p.v;
    }
    if (pts_.rows() < 2) throw std::invalid_argument("Polytope: slope dimension must be >= 1");
    if (!pts_.allFinite()) throw std::invalid_argument("Polytope: non-finite vertex coordinate");
  }

  static Polytope singleton(Scalar a, const VectorX<Scalar>& v) {
    MatrixX<Scalar> m(1 + v.size(), 1);
    m(0, 0) = a;
    m.col(0).tail(v.size()) = v;
    return Polytope(std::move(m));
  }

  /// {(0, 0)} in R^{1+d}.
  static Polytope origin(Index d) { return singleton(Scalar(0), VectorX<Scalar>::Zero(d)); }

  Index dim() const { return pts_.rows() - 1; }
  Index vertex_count() const { return pts_.cols(); }

  SupportPoint<Scalar> vertex(Index k) const {
    return SupportPoint<Scalar>(pts_(0, k), pts_.col(k).tail(dim()));
  }

  std::vector<SupportPoint<Scalar>> vertices() const {
    std::vector<SupportPoint<Scalar>> out;
    out.reserve(static_cast<std::size_t>(vertex_count()));
    for (Index k = 0; k < vertex_count(); ++k) out.push_back(vertex(k));
    return out;
  }

  const MatrixX<Scalar>& lifted() const { return pts_; }

  auto intercepts() const { return pts_.row(0); }
  auto slopes() const { return pts_.bottomRows(dim()); }

 private:
  MatrixX<Scalar> pts_;
};

using SupportPointd = SupportPoint<double>;
using Polytoped = Polytope<double>;

/// Thrown when an operation requires a function bounded below (or above) and
/// the input is not; `direction` certifies it: f(x - t * direction) diverges
/// (to -inf for minimum checks, to +inf for maximum checks).
template <typename Scalar>
class UnboundedError : public std::runtime_error {
 public:
  UnboundedError(const std::string& what, VectorX<Scalar> certificate)
      : std::runtime_error(what), direction(std::move(certificate)) {}

  VectorX<Scalar> direction;
};

/// Thrown when a user-assertable hypothesis of a check is not met
/// (infeasible candidate point, missing IPCQ assertion, missing penalty
/// parameter, and the like).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

} // namespace dcopt
