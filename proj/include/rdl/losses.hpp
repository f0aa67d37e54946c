#ifndef RDL_LOSSES_HPP_
#define RDL_LOSSES_HPP_

#include <functional>
#include <optional>
#include <string_view>

namespace rdl {

enum class LossKind { Logistic, Exponential, Hinge };

// Constants that place a loss inside the bounded class used by the
// convergence and generalization bounds.
struct LossConstants {
  double ell_zero = 0.0;    // l(0)
  double deriv_zero = 0.0;  // the fixed element s_bar of dl(0)
  std::optional<double> L_phi;  // Lipschitz constant of the link
  std::optional<double> c_ell;  // l'(r) <= c_ell * l(r) for r <= 0
  // Orlicz-domination constant as a function of the measure's total mass.
  std::function<double(double)> c_ell_mu;
};

// A classification loss: convex, nondecreasing, nonnegative, l(0) > 0 and
// inf l = 0. The set of kinds is closed; every kind carries its own
// closed-form derivative, conjugate and link.
//
// Kink convention for the hinge loss: deriv(-1) = 0 (left derivative).
class Loss {
 public:
  explicit Loss(LossKind kind) : kind_(kind) {}

  // Accepts "logistic", "exp"/"exponential" and "hinge".
  static Loss parse(std::string_view name);

  LossKind kind() const { return kind_; }
  std::string_view name() const;

  bool member_of_L() const { return true; }
  // Strictly convex and twice continuously differentiable.
  bool member_of_L2plus() const { return kind_ != LossKind::Hinge; }
  bool member_of_Lb() const { return kind_ != LossKind::Hinge; }
  std::string_view subgradient_convention() const;

  // l(r). Exponential saturates to +inf above ln(DBL_MAX).
  double eval(double r) const;
  // A fixed element of dl(r).
  double deriv(double r) const;
  // Throws UnsupportedLossError for the hinge loss.
  double second_deriv(double r) const;

  // Fenchel conjugate l*(s); +inf outside its domain.
  double conjugate(double s) const;
  // (l*)'(s) = (l')^{-1}(s). Throws DomainError outside the open domain.
  double conjugate_deriv(double s) const;
  // (l*)''(s) = 1 / l''((l*)'(s)).
  double conjugate_second_deriv(double s) const;
  // sup of dom l*: 1 for logistic and hinge, +inf for exponential.
  double conjugate_domain_upper() const;

  // phi(r) = l'(r) / (l'(r) + l'(-r)).
  double link(double r) const;

  // Symmetrized curvature: max{l(s) - l(0) - s l'(0), l(-s) - l(0) + s l'(0)}.
  double beta(double s) const;
  // A one-sided derivative of beta at s >= 0 (right derivative at kinks).
  double beta_deriv(double s) const;
  // sup_r [r s - beta(r)], possibly +inf.
  double beta_conj(double s) const;
  // lim_{r -> inf} beta'(r); beta_conj is +inf beyond it.
  double beta_slope_limit() const;

  LossConstants constants() const;

 private:
  LossKind kind_;
};

bool operator==(const Loss& a, const Loss& b);

}  // namespace rdl

#endif  // RDL_LOSSES_HPP_
