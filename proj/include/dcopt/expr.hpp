#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dcopt/types.hpp"

namespace dcopt {

enum class ExprKind { kConst, kAffine, kAbs, kNeg, kScale, kSum, kMax, kMin };

/// Immutable piecewise-affine expression tree. Leaves are constants and
/// affine functions a + <v, x>; interior nodes are abs, negation, scaling,
/// finite sums, maxima and minima. Copies share structure.
template <typename Scalar>
class Expr {
 public:
  static Expr constant(Scalar c) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::kConst;
    n->value = c;
    return Expr(std::move(n));
  }

  static Expr affine(Scalar a, VectorX<Scalar> v) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::kAffine;
    n->value = a;
    n->slope = std::move(v);
    return Expr(std::move(n));
  }

  static Expr abs(Expr e) { return wrap(ExprKind::kAbs, {std::move(e)}); }
  static Expr neg(Expr e) { return wrap(ExprKind::kNeg, {std::move(e)}); }

  static Expr scale(Scalar k, Expr e) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::kScale;
    n->value = k;
    n->children.push_back(std::move(e));
    return Expr(std::move(n));
  }

  static Expr sum(std::vector<Expr> es) { return wrap_nary(ExprKind::kSum, std::move(es)); }
  static Expr max_of(std::vector<Expr> es) { return wrap_nary(ExprKind::kMax, std::move(es)); }
  static Expr min_of(std::vector<Expr> es) { return wrap_nary(ExprKind::kMin, std::move(es)); }

  ExprKind kind() const { return node_->kind; }
  Scalar scalar() const { return node_->value; }          // Const c or Scale k
  Scalar intercept() const { return node_->value; }       // Affine a
  const VectorX<Scalar>& slope() const { return node_->slope; }
  const std::vector<Expr>& children() const { return node_->children; }

  /// Direct recursive evaluation; independent of any support-set machinery.
  Scalar operator()(const VectorX<Scalar>& x) const {
    switch (node_->kind) {
      case ExprKind::kConst: return node_->value;
      case ExprKind::kAffine: return node_->value + node_->slope.dot(x);
      case ExprKind::kAbs: return std::abs(node_->children[0](x));
      case ExprKind::kNeg: return -node_->children[0](x);
      case ExprKind::kScale: return node_->value * node_->children[0](x);
      case ExprKind::kSum: {
        Scalar acc = Scalar(0);
        for (const auto& c : node_->children) acc += c(x);
        return acc;
      }
      case ExprKind::kMax: {
        Scalar acc = node_->children[0](x);
        for (std::size_t i = 1; i < node_->children.size(); ++i)
          acc = std::max(acc, node_->children[i](x));
        return acc;
      }
      case ExprKind::kMin: {
        Scalar acc = node_->children[0](x);
        for (std::size_t i = 1; i < node_->children.size(); ++i)
          acc = std::min(acc, node_->children[i](x));
        return acc;
      }
    }
    throw std::logic_error("Expr: corrupted node kind");
  }

 private:
  struct Node {
    ExprKind kind{};
    Scalar value{};
    VectorX<Scalar> slope;
    std::vector<Expr> children;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr wrap(ExprKind kind, std::vector<Expr> es) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = std::move(es);
    return Expr(std::move(n));
  }

  static Expr wrap_nary(ExprKind kind, std::vector<Expr> es) {
    if (es.empty()) throw std::invalid_argument("Expr: n-ary node needs at least one child");
    return wrap(kind, std::move(es));
  }

  std::shared_ptr<const Node> node_;
};

using Exprd = Expr<double>;

} // namespace dcopt
