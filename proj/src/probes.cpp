#include "qpt/probes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qpt {

const char* to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::nc_order: return "nc-order";
    case ProbeKind::mub_order: return "mub-order";
    case ProbeKind::uic_0n: return "uic-0n";
    case ProbeKind::uic_n_plus: return "uic-n+";
    case ProbeKind::uic_mixed: return "uic-mixed";
    case ProbeKind::custom: return "custom";
  }
  return "unknown";
}

ProbeKind probe_kind_from_string(const std::string& s) {
  if (s == "nc-order" || s == "nc") return ProbeKind::nc_order;
  if (s == "mub-order" || s == "mub") return ProbeKind::mub_order;
  if (s == "uic-0n") return ProbeKind::uic_0n;
  if (s == "uic-n+") return ProbeKind::uic_n_plus;
  if (s == "uic-mixed") return ProbeKind::uic_mixed;
  if (s == "custom") return ProbeKind::custom;
  throw Error(ErrorCode::parse_error, "unknown probe kind '" + s + "'");
}

const char* to_string(PovmKind kind) {
  switch (kind) {
    case PovmKind::pure_state: return "pure-state";
    case PovmKind::truncated: return "truncated";
    case PovmKind::mub: return "mub";
    case PovmKind::custom: return "custom";
  }
  return "unknown";
}

PovmKind povm_kind_from_string(const std::string& s) {
  if (s == "pure-state" || s == "pure") return PovmKind::pure_state;
  if (s == "truncated") return PovmKind::truncated;
  if (s == "mub") return PovmKind::mub;
  if (s == "custom") return PovmKind::custom;
  throw Error(ErrorCode::parse_error, "unknown POVM kind '" + s + "'");
}

const char* to_string(ProbeOrdering o) {
  switch (o) {
    case ProbeOrdering::nc: return "nc";
    case ProbeOrdering::uic_0n_then_nc: return "uic-0n-then-nc";
    case ProbeOrdering::uic_n_plus_then_mub: return "uic-n+-then-mub";
  }
  return "unknown";
}

ProbeOrdering probe_ordering_from_string(const std::string& s) {
  if (s == "nc") return ProbeOrdering::nc;
  if (s == "uic-0n-then-nc") return ProbeOrdering::uic_0n_then_nc;
  if (s == "uic-n+-then-mub") return ProbeOrdering::uic_n_plus_then_mub;
  throw Error(ErrorCode::parse_error, "unknown probe ordering '" + s + "'");
}

ProbeSet ProbeSet::prefix(int k) const {
  require(k >= 0 && k <= size(), ErrorCode::invalid_argument, "prefix length out of range");
  ProbeSet out{dim, {states.begin(), states.begin() + k}, {labels.begin(), labels.begin() + k}, kind};
  return out;
}

Real Povm::completeness_residual() const {
  Matrix s = Matrix::Zero(dim, dim);
  for (const auto& e : effects) s += e;
  return (s - Matrix::Identity(dim, dim)).norm();
}

Real Povm::min_effect_eigenvalue() const {
  Real m = std::numeric_limits<Real>::infinity();
  for (const auto& e : effects) m = std::min(m, min_eigenvalue(e));
  return m;
}

Vector basis_ket(int d, int k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

Vector plus_ket(int d) { return Vector::Constant(d, 1.0 / std::sqrt(static_cast<Real>(d))); }

ProbeSet probes_from_kets(int dim, const std::vector<Vector>& kets, ProbeKind kind, std::vector<std::string> labels) {
  ProbeSet out;
  out.dim = dim;
  out.kind = kind;
  for (std::size_t j = 0; j < kets.size(); ++j) {
    require(kets[j].size() == dim, ErrorCode::dimension_mismatch, "ket has wrong length");
    Vector k = kets[j].normalized();
    out.states.push_back(projector(k));
  }
  if (labels.empty())
    for (std::size_t j = 0; j < kets.size(); ++j) labels.push_back("psi" + std::to_string(j));
  out.labels = std::move(labels);
  return out;
}

ProbeSet standard_probe_kets(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  std::vector<Vector> kets;
  std::vector<std::string> labels;
  const Real s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k) {
    kets.push_back(basis_ket(d, k));
    labels.push_back("|" + std::to_string(k) + ">");
  }
  for (int k = 0; k + 1 < d; ++k)
    for (int n = k + 1; n < d; ++n) {
      kets.push_back(s * (basis_ket(d, k) + basis_ket(d, n)));
      labels.push_back("|" + std::to_string(k) + "+" + std::to_string(n) + ">");
    }
  for (int k = 0; k + 1 < d; ++k)
    for (int n = k + 1; n < d; ++n) {
      kets.push_back(s * (basis_ket(d, k) + kI * basis_ket(d, n)));
      labels.push_back("|" + std::to_string(k) + "+i" + std::to_string(n) + ">");
    }
  return probes_from_kets(d, kets, ProbeKind::nc_order, std::move(labels));
}

Vector mub_ket(int d, int n, int b) {
  require(is_prime(d), ErrorCode::unsupported_dimension, "MUB construction needs prime d");
  require(n >= 0 && n < d && b >= 0 && b < d, ErrorCode::invalid_argument, "MUB index out of range");
  Vector v(d);
  const Real norm = 1.0 / std::sqrt(static_cast<Real>(d));
  if (d == 2) {
    // Pauli X (b=0) and Y (b=1) eigenbases.
    const Complex phase = (b == 0) ? Complex(1.0) : kI;
    v(0) = norm;
    v(1) = norm * phase * (n == 0 ? 1.0 : -1.0);
    return v;
  }
  for (int m = 0; m < d; ++m) {
    const long e = (static_cast<long>(b) * m * m + static_cast<long>(n) * m) % d;
    const Real ang = 2.0 * std::numbers::pi * static_cast<Real>(e) / d;
    v(m) = norm * Complex(std::cos(ang), std::sin(ang));
  }
  return v;
}

ProbeSet mub_probe_kets(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  require(is_prime(d), ErrorCode::unsupported_dimension, "MUB probes implemented for prime d only");
  std::vector<Vector> kets;
  std::vector<std::string> labels;
  for (int n = 0; n < d; ++n) {
    kets.push_back(basis_ket(d, n));
    labels.push_back("|" + std::to_string(n) + ">");
  }
  for (int b = 0; b < d; ++b)
    for (int n = 0; n + 1 < d; ++n) {
      kets.push_back(mub_ket(d, n, b));
      labels.push_back("|" + std::to_string(n) + ";" + std::to_string(b) + ">");
    }
  return probes_from_kets(d, kets, ProbeKind::mub_order, std::move(labels));
}

ProbeSet uic_pure_zero_n(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  std::vector<Vector> kets{basis_ket(d, 0)};
  std::vector<std::string> labels{"|0>"};
  for (int n = 1; n < d; ++n) {
    kets.push_back((basis_ket(d, 0) + basis_ket(d, n)) / std::sqrt(2.0));
    labels.push_back("|0+" + std::to_string(n) + ">");
  }
  return probes_from_kets(d, kets, ProbeKind::uic_0n, std::move(labels));
}

ProbeSet uic_pure_plus(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  std::vector<Vector> kets;
  std::vector<std::string> labels;
  for (int n = 0; n + 1 < d; ++n) {
    kets.push_back(basis_ket(d, n));
    labels.push_back("|" + std::to_string(n) + ">");
  }
  kets.push_back(plus_ket(d));
  labels.push_back("|+>");
  return probes_from_kets(d, kets, ProbeKind::uic_n_plus, std::move(labels));
}

RealVector default_mixed_spectrum(int d) {
  RealVector lam(d);
  for (int n = 0; n < d; ++n) lam(n) = static_cast<Real>(d - n);
  return lam / lam.sum();
}

ProbeSet uic_mixed(int d, const RealVector& lambda) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  require(lambda.size() == d, ErrorCode::invalid_argument, "spectrum length must equal d");
  require(std::abs(lambda.sum() - 1.0) <= 1e-10, ErrorCode::invalid_argument, "spectrum must sum to 1");
  for (int n = 0; n < d; ++n) {
    require(lambda(n) > 0.0, ErrorCode::invalid_argument, "spectrum must be positive");
    if (n > 0) require(lambda(n) < lambda(n - 1), ErrorCode::invalid_argument, "spectrum must be strictly decreasing");
  }
  ProbeSet out;
  out.dim = d;
  out.kind = ProbeKind::uic_mixed;
  out.states.push_back(lambda.cast<Complex>().asDiagonal());
  out.states.push_back(projector(plus_ket(d)));
  out.labels = {"rho0", "|+>"};
  return out;
}

int commutant_dimension(const ProbeSet& p, Real tol) {
  require(!p.states.empty(), ErrorCode::invalid_argument, "empty probe set");
  const int d = p.dim;
  const Matrix id = Matrix::Identity(d, d);
  // vec(rho X - X rho) = (I (x) rho - rho^T (x) I) vec(X)
  Matrix gram = Matrix::Zero(d * d, d * d);
  for (const auto& rho : p.states) {
    Matrix c = kron(id, rho) - kron(rho.transpose(), id);
    gram.noalias() += c.adjoint() * c;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const Real scale = std::max<Real>(1.0, es.eigenvalues().maxCoeff());
  return static_cast<int>((es.eigenvalues().array() <= tol * scale).count());
}

int operator_span_rank(const std::vector<Matrix>& ops, Real tol) {
  if (ops.empty()) return 0;
  const Eigen::Index n = static_cast<Eigen::Index>(ops.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = (ops[i].adjoint() * ops[j]).trace();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const Real scale = std::max<Real>(1e-300, es.eigenvalues().maxCoeff());
  return static_cast<int>((es.eigenvalues().array() > tol * scale).count());
}

ProbeSet ordered_probes(int d, ProbeOrdering ordering) {
  if (ordering == ProbeOrdering::nc) return standard_probe_kets(d);
  const bool zero_n = ordering == ProbeOrdering::uic_0n_then_nc;
  ProbeSet head = zero_n ? uic_pure_zero_n(d) : uic_pure_plus(d);
  ProbeSet rest = zero_n ? standard_probe_kets(d) : mub_probe_kets(d);
  ProbeSet out = head;
  for (int j = 0; j < rest.size(); ++j) {
    bool used = false;
    for (const auto& h : head.states) used = used || (h - rest.states[j]).norm() < 1e-12;
    if (used) continue;
    out.states.push_back(rest.states[j]);
    out.labels.push_back(rest.labels[j]);
  }
  out.kind = ProbeKind::custom;
  require(out.size() == d * d, ErrorCode::inconsistent_inputs, "ordered probe set does not have d^2 states");
  return out;
}

namespace {

Matrix pure_povm_effect_n(int d, int n, Real b, bool tilde) {
  Matrix e = b * Matrix::Identity(d, d);
  if (!tilde) {
    e(0, n) += b;
    e(n, 0) += b;
  } else {
    e(0, n) += b * kI;
    e(n, 0) -= b * kI;
  }
  return e;
}

Povm build_pure_povm(int d, int last_n, Real a, Real b, PovmKind kind) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  require(a > 0.0 && b > 0.0, ErrorCode::infeasible_parameters, "POVM weights must be positive");
  Povm p;
  p.dim = d;
  p.kind = kind;
  Matrix e0 = Matrix::Zero(d, d);
  e0(0, 0) = a;
  p.effects.push_back(e0);
  p.labels.push_back("E0");
  for (int n = 1; n <= last_n; ++n) {
    p.effects.push_back(pure_povm_effect_n(d, n, b, false));
    p.labels.push_back("E" + std::to_string(n));
  }
  for (int n = 1; n <= last_n; ++n) {
    p.effects.push_back(pure_povm_effect_n(d, n, b, true));
    p.labels.push_back("Et" + std::to_string(n));
  }
  Matrix rest = Matrix::Identity(d, d);
  for (const auto& e : p.effects) rest -= e;
  const Real me = min_eigenvalue(rest);
  if (me < -1e-10)
    throw Error(ErrorCode::infeasible_parameters,
                "complement effect has eigenvalue " + std::to_string(me) + " for a=" + std::to_string(a) +
                    ", b=" + std::to_string(b));
  p.effects.push_back(rest);
  p.labels.push_back("E2d");
  return p;
}

}  // namespace

Povm pure_state_povm(int d, Real a, Real b) { return build_pure_povm(d, d - 1, a, b, PovmKind::pure_state); }

Povm truncated_povm(int d, int k, Real a, Real b) {
  require(k >= 0 && k <= d - 1, ErrorCode::invalid_argument, "truncation index must lie in [0, d-1]");
  return build_pure_povm(d, d - 1 - k, a, b, k == 0 ? PovmKind::pure_state : PovmKind::truncated);
}

Povm mub_povm(int d) {
  require(d >= 2, ErrorCode::invalid_dimension, "d must be >= 2");
  require(is_prime(d), ErrorCode::unsupported_dimension, "MUB POVM implemented for prime d only");
  Povm p;
  p.dim = d;
  p.kind = PovmKind::mub;
  const Real w = 1.0 / (d + 1);
  for (int n = 0; n < d; ++n) {
    p.effects.push_back(w * projector(basis_ket(d, n)));
    p.labels.push_back("|" + std::to_string(n) + ">");
  }
  for (int b = 0; b < d; ++b)
    for (int n = 0; n < d; ++n) {
      p.effects.push_back(w * projector(mub_ket(d, n, b)));
      p.labels.push_back("|" + std::to_string(n) + ";" + std::to_string(b) + ">");
    }
  return p;
}

}  // namespace qpt
