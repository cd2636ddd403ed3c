#include "ret14/covariant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ret14/errors.hpp"

namespace ret14 {

FourVector& FourVector::operator+=(const FourVector& o) {
  for (std::size_t i = 0; i < 4; ++i) x[i] += o.x[i];
  return *this;
}
FourVector& FourVector::operator-=(const FourVector& o) {
  for (std::size_t i = 0; i < 4; ++i) x[i] -= o.x[i];
  return *this;
}
FourVector& FourVector::operator*=(double s) {
  for (auto& v : x) v *= s;
  return *this;
}
FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
FourVector operator*(double s, FourVector a) { return a *= s; }

SymTensor2& SymTensor2::operator+=(const SymTensor2& o) {
  for (std::size_t i = 0; i < 10; ++i) v_[i] += o.v_[i];
  return *this;
}
SymTensor2& SymTensor2::operator-=(const SymTensor2& o) {
  for (std::size_t i = 0; i < 10; ++i) v_[i] -= o.v_[i];
  return *this;
}
SymTensor2& SymTensor2::operator*=(double s) {
  for (auto& v : v_) v *= s;
  return *this;
}
SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }

SymTensor2 SymTensor2::outer(const FourVector& a, const FourVector& b) {
  SymTensor2 t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) t(i, j) = 0.5 * (a[i] * b[j] + a[j] * b[i]);
  return t;
}

SymTensor2 SymTensor2::from_matrix_symmetrized(const Matrix4& m) {
  SymTensor2 t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) t(i, j) = 0.5 * (m[i][j] + m[j][i]);
  return t;
}

Rank3& Rank3::operator+=(const Rank3& o) {
  for (std::size_t a = 0; a < 4; ++a) s_[a] += o.s_[a];
  return *this;
}
Rank3& Rank3::operator*=(double s) {
  for (auto& sl : s_) sl *= s;
  return *this;
}

FourVector lower(const FourVector& v) {
  FourVector out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = kMetricDiag[i] * v[i];
  return out;
}
FourVector raise(const FourVector& v) { return lower(v); }

SymTensor2 lower(const SymTensor2& t) {
  SymTensor2 out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) out(i, j) = kMetricDiag[i] * kMetricDiag[j] * t(i, j);
  return out;
}
SymTensor2 raise(const SymTensor2& t) { return lower(t); }

SymTensor2 metric_tensor() {
  SymTensor2 g;
  for (std::size_t i = 0; i < 4; ++i) g(i, i) = kMetricDiag[i];
  return g;
}

double dot(const FourVector& u, const FourVector& v) {
  return u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3];
}

double trace(const SymTensor2& m) { return m(0, 0) - m(1, 1) - m(2, 2) - m(3, 3); }

double full_contract(const SymTensor2& m, const SymTensor2& n) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) s += kMetricDiag[i] * kMetricDiag[j] * m(i, j) * n(i, j);
  return s;
}

double contract(const SymTensor2& m, const FourVector& u, const FourVector& v) {
  const FourVector ul = lower(u);
  const FourVector vl = lower(v);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) s += m(i, j) * ul[i] * vl[j];
  return s;
}

FourVector contract(const SymTensor2& m, const FourVector& u) {
  const FourVector ul = lower(u);
  FourVector out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += m(i, j) * ul[j];
  return out;
}

FourVector rest_velocity(double c) { return FourVector{{c, 0.0, 0.0, 0.0}}; }

FourVector velocity_from_three(const std::array<double, 3>& v, double c) {
  const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  if (!(v2 < c * c)) throw NormalizationError("three-velocity must be subluminal");
  const double lorentz = 1.0 / std::sqrt(1.0 - v2 / (c * c));
  return FourVector{{lorentz * c, lorentz * v[0], lorentz * v[1], lorentz * v[2]}};
}

void check_normalized(const FourVector& U, double c, double tol) {
  const double defect = dot(U, U) - c * c;
  if (!(std::abs(defect) <= tol * std::max(U[0] * U[0], c * c))) {
    throw NormalizationError("four-velocity not normalized: U.U - c^2 = " + std::to_string(defect));
  }
}

SymTensor2 projector(const FourVector& U, double c) {
  check_normalized(U, c);
  SymTensor2 h;
  const double ic2 = 1.0 / (c * c);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) h(i, j) = U[i] * U[j] * ic2 - metric(i, j);
  return h;
}

Matrix4 projector_mixed(const FourVector& U, double c) {
  check_normalized(U, c);
  const FourVector Ul = lower(U);
  Matrix4 h{};
  const double ic2 = 1.0 / (c * c);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) h[i][j] = U[i] * Ul[j] * ic2 - (i == j ? 1.0 : 0.0);
  return h;
}

SymTensor2 deviatoric4(const SymTensor2& m) {
  const double tr = trace(m);
  return m - (0.25 * tr) * metric_tensor();
}

SymTensor2 deviatoric3(const SymTensor2& m, const FourVector& U, double c) {
  const Matrix4 hm = projector_mixed(U, c);
  const SymTensor2 h = projector(U, c);
  const double hm_trace = full_contract(h, m);
  SymTensor2 out;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a; b < 4; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) s += hm[a][i] * hm[b][j] * m(i, j);
      out(a, b) = s - h(a, b) * hm_trace / 3.0;
    }
  }
  return out;
}

Matrix4 boost_x(double v, double c) {
  if (!(std::abs(v) < c)) throw NormalizationError("boost velocity must be subluminal");
  const double beta = v / c;
  const double lorentz = 1.0 / std::sqrt(1.0 - beta * beta);
  Matrix4 l{};
  l[0][0] = lorentz;
  l[0][1] = lorentz * beta;
  l[1][0] = lorentz * beta;
  l[1][1] = lorentz;
  l[2][2] = 1.0;
  l[3][3] = 1.0;
  return l;
}

FourVector transform(const Matrix4& l, const FourVector& v) {
  FourVector out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += l[i][j] * v[j];
  return out;
}

SymTensor2 transform(const Matrix4& l, const SymTensor2& t) {
  SymTensor2 out;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a; b < 4; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) s += l[a][i] * l[b][j] * t(i, j);
      out(a, b) = s;
    }
  return out;
}

Rank3 transform(const Matrix4& l, const Rank3& t) {
  std::array<SymTensor2, 4> inner;
  for (std::size_t k = 0; k < 4; ++k) inner[k] = transform(l, t.slice(k));
  Rank3 out;
  for (std::size_t a = 0; a < 4; ++a) {
    SymTensor2 s;
    for (std::size_t k = 0; k < 4; ++k) s += l[a][k] * inner[k];
    out.slice(a) = s;
  }
  return out;
}

Rank3 triple_tensor(double a, double b, const FourVector& U, double c) {
  const SymTensor2 h = projector(U, c);
  const double ic2 = 1.0 / (c * c);
  Rank3 out;
  for (std::size_t al = 0; al < 4; ++al)
    for (std::size_t be = 0; be < 4; ++be)
      for (std::size_t ga = be; ga < 4; ++ga) {
        out(al, be, ga) = a * U[al] * (h(be, ga) + 3.0 * U[be] * U[ga] * ic2) +
                          b * (h(al, ga) * U[be] + h(al, be) * U[ga]);
      }
  return out;
}

Rank3 triple_tensor_symmetric(double abar, double bbar, const FourVector& U, double c) {
  const SymTensor2 h = projector(U, c);
  Rank3 out;
  for (std::size_t al = 0; al < 4; ++al)
    for (std::size_t be = 0; be < 4; ++be)
      for (std::size_t ga = be; ga < 4; ++ga) {
        out(al, be, ga) = abar * U[al] * U[be] * U[ga] +
                          bbar * (h(al, be) * U[ga] + h(al, ga) * U[be] + h(be, ga) * U[al]);
      }
  return out;
}

Rank3 deviatoric_last_pair(const Rank3& t) {
  Rank3 out;
  for (std::size_t a = 0; a < 4; ++a) out.slice(a) = deviatoric4(t.slice(a));
  return out;
}

EquilibriumTensors assemble_equilibrium_tensors(double rho, double p, double e, double a, double b,
                                                const FourVector& U, double c) {
  EquilibriumTensors out;
  const SymTensor2 h = projector(U, c);
  out.V = rho * U;
  out.T = p * h + (e / (c * c)) * SymTensor2::outer(U, U);
  out.A = triple_tensor(a, b, U, c);
  return out;
}

void NoneqFields::validate(const FourVector& U, double c, double tol) const {
  double qmag = 0.0;
  for (std::size_t i = 0; i < 4; ++i) qmag = std::max(qmag, std::abs(q[i]));
  double tmag = 0.0;
  for (double v : t.packed()) tmag = std::max(tmag, std::abs(v));
  const double ulen = std::max(std::abs(U[0]), c);

  if (std::abs(dot(q, U)) > tol * qmag * ulen) {
    throw ValidationError("heat flux not orthogonal to U: q.U = " + std::to_string(dot(q, U)));
  }
  const FourVector tu = contract(t, U);
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(tu[i]) > tol * tmag * ulen) {
      throw ValidationError("shear stress not orthogonal to U");
    }
  }
  if (std::abs(trace(t)) > tol * tmag) {
    throw ValidationError("shear stress not traceless: g.t = " + std::to_string(trace(t)));
  }
  if (!std::isfinite(pi)) throw ValidationError("dynamical pressure not finite");
}

SymTensor2 assemble_production(const ProductionCoefficients& prod, const NoneqFields& fields,
                               const FourVector& U, double c) {
  fields.validate(U, c);
  const SymTensor2 uq = 2.0 * SymTensor2::outer(U, fields.q);
  const SymTensor2 bulk = SymTensor2::outer(U, U) - (0.25 * c * c) * metric_tensor();
  return prod.a1 * uq + prod.a2 * fields.t + (prod.a3 * fields.pi) * bulk;
}

double entropy_production(double T, const NoneqFields& fields, const FourVector& grad_T,
                          const Matrix4& grad_U, const FourVector& U_dot, double c) {
  const FourVector udot_lower = lower(U_dot);
  double heat = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    heat += fields.q[a] * (grad_T[a] - (T / (c * c)) * udot_lower[a]);
  }
  double shear = 0.0;
  double theta = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    theta += grad_U[a][a];
    for (std::size_t b = 0; b < 4; ++b) shear += fields.t(a, b) * kMetricDiag[b] * grad_U[a][b];
  }
  return -heat / (T * T) + (shear - fields.pi * theta) / T;
}

}  // namespace ret14
