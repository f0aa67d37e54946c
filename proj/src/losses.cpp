#include "rdl/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdl/error.hpp"

namespace rdl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

double sigmoid(double r) {
  if (r >= 0.0) return 1.0 / (1.0 + std::exp(-r));
  const double e = std::exp(r);
  return e / (1.0 + e);
}

// x ln x with 0 ln 0 = 0.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

double log_cosh(double x) {
  const double ax = std::abs(x);
  if (ax > 20.0) return ax - kLn2 + std::log1p(std::exp(-2.0 * ax));
  const double sh = std::sinh(0.5 * ax);
  return std::log1p(2.0 * sh * sh);
}

[[noreturn]] void unsupported(const Loss& loss, const char* op) {
  throw UnsupportedLossError(std::string(op) + " is not defined for the " +
                             std::string(loss.name()) + " loss");
}

}  // namespace

Loss Loss::parse(std::string_view name) {
  if (name == "logistic") return Loss(LossKind::Logistic);
  if (name == "exp" || name == "exponential") return Loss(LossKind::Exponential);
  if (name == "hinge") return Loss(LossKind::Hinge);
  throw DomainError("unknown loss '" + std::string(name) + "'");
}

std::string_view Loss::name() const {
  switch (kind_) {
    case LossKind::Logistic: return "logistic";
    case LossKind::Exponential: return "exp";
    case LossKind::Hinge: return "hinge";
  }
  return "unknown";
}

std::string_view Loss::subgradient_convention() const {
  if (kind_ == LossKind::Hinge) {
    return "left derivative at the kink: deriv(-1) = 0, deriv(0) = 1";
  }
  return "differentiable everywhere";
}

double Loss::eval(double r) const {
  switch (kind_) {
    case LossKind::Logistic:
      return r > 0.0 ? r + std::log1p(std::exp(-r)) : std::log1p(std::exp(r));
    case LossKind::Exponential:
      if (r > std::log(std::numeric_limits<double>::max())) return kInf;
      return std::exp(r);
    case LossKind::Hinge:
      return std::max(0.0, 1.0 + r);
  }
  return kInf;
}

double Loss::deriv(double r) const {
  switch (kind_) {
    case LossKind::Logistic: return sigmoid(r);
    case LossKind::Exponential: return std::exp(r);
    case LossKind::Hinge: return r > -1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double Loss::second_deriv(double r) const {
  switch (kind_) {
    case LossKind::Logistic: return sigmoid(r) * sigmoid(-r);
    case LossKind::Exponential: return std::exp(r);
    case LossKind::Hinge: unsupported(*this, "second_deriv");
  }
  return 0.0;
}

double Loss::conjugate(double s) const {
  if (s < 0.0) return kInf;
  switch (kind_) {
    case LossKind::Logistic:
      if (s > 1.0) return kInf;
      return xlogx(s) + xlogx(1.0 - s);
    case LossKind::Exponential:
      return xlogx(s) - s;
    case LossKind::Hinge:
      if (s > 1.0) return kInf;
      return -s;
  }
  return kInf;
}

double Loss::conjugate_deriv(double s) const {
  switch (kind_) {
    case LossKind::Logistic:
      if (!(s > 0.0 && s < 1.0)) {
        throw DomainError("conjugate_deriv of logistic needs 0 < s < 1, got " +
                          std::to_string(s));
      }
      return std::log(s) - std::log1p(-s);
    case LossKind::Exponential:
      if (!(s > 0.0)) {
        throw DomainError("conjugate_deriv of exp needs s > 0, got " + std::to_string(s));
      }
      return std::log(s);
    case LossKind::Hinge:
      unsupported(*this, "conjugate_deriv");
  }
  return 0.0;
}

double Loss::conjugate_second_deriv(double s) const {
  switch (kind_) {
    case LossKind::Logistic:
      if (!(s > 0.0 && s < 1.0)) throw DomainError("logistic (l*)'' needs 0 < s < 1");
      return 1.0 / (s * (1.0 - s));
    case LossKind::Exponential:
      if (!(s > 0.0)) throw DomainError("exp (l*)'' needs s > 0");
      return 1.0 / s;
    case LossKind::Hinge:
      unsupported(*this, "conjugate_second_deriv");
  }
  return 0.0;
}

double Loss::conjugate_domain_upper() const {
  return kind_ == LossKind::Exponential ? kInf : 1.0;
}

double Loss::link(double r) const {
  switch (kind_) {
    case LossKind::Logistic: return sigmoid(r);
    // e^r / (e^r + e^-r)
    case LossKind::Exponential: return sigmoid(2.0 * r);
    case LossKind::Hinge: unsupported(*this, "link");
  }
  return 0.5;
}

namespace {

// l(s) - l(0) - s l'(0), evaluated without cancellation where possible.
double bregman_at_zero(LossKind kind, double s) {
  switch (kind) {
    case LossKind::Logistic: return log_cosh(0.5 * s);
    case LossKind::Exponential: return std::expm1(s) - s;
    case LossKind::Hinge: return std::max(0.0, -1.0 - s);
  }
  return 0.0;
}

}  // namespace

double Loss::beta(double s) const {
  return std::max(bregman_at_zero(kind_, s), bregman_at_zero(kind_, -s));
}

double Loss::beta_deriv(double s) const {
  if (s < 0.0) return -beta_deriv(-s);
  const double d0 = deriv(0.0);
  const double up = bregman_at_zero(kind_, s);
  const double down = bregman_at_zero(kind_, -s);
  const double d_up = deriv(s) - d0;
  const double d_down = d0 - deriv(-s);
  if (up > down) return d_up;
  if (down > up) return d_down;
  return std::max(d_up, d_down);
}

double Loss::beta_slope_limit() const {
  const double d0 = deriv(0.0);
  return std::max(conjugate_domain_upper() - d0, d0);
}

double Loss::beta_conj(double s) const {
  const double t = std::abs(s);
  if (t == 0.0) return 0.0;
  if (kind_ == LossKind::Exponential) {
    // beta(z) = e^z - 1 - z on z >= 0.
    return (1.0 + t) * std::log1p(t) - t;
  }
  const double limit = beta_slope_limit();
  if (t > limit) return kInf;
  auto inner = [&](double r) { return t * r - beta(r); };
  if (t == limit) {
    // Concave and nondecreasing: the supremum is the limit at infinity.
    double best = inner(1.0);
    for (double r = 2.0; r < 1e6; r *= 2.0) {
      const double v = inner(r);
      if (v - best <= 1e-15) return std::max(best, v);
      best = v;
    }
    return best;
  }
  double hi = 1.0;
  while (beta_deriv(hi) < t && hi < 1e300) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (beta_deriv(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::max(inner(lo), inner(hi));
}

LossConstants Loss::constants() const {
  LossConstants c;
  c.ell_zero = eval(0.0);
  c.deriv_zero = deriv(0.0);
  switch (kind_) {
    case LossKind::Logistic:
      c.L_phi = 0.25;
      c.c_ell = 2.0;
      // Lipschitz bound L / l'(0) with L = 1.
      c.c_ell_mu = [](double) { return 2.0; };
      break;
    case LossKind::Exponential:
      c.L_phi = 0.5;
      c.c_ell = 1.0;
      c.c_ell_mu = [](double mass) {
        if (!(mass > 0.0) || mass > 2.0) {
          throw DomainError("exp c_{l,mu} is only established for 0 < mu(Z) <= 2");
        }
        return 1.0 / mass;
      };
      break;
    case LossKind::Hinge:
      c.c_ell_mu = [](double) { return 1.0; };
      break;
  }
  return c;
}

bool operator==(const Loss& a, const Loss& b) { return a.kind() == b.kind(); }

}  // namespace rdl
