#pragma once

#include <array>
#include <cstddef>

// Flat Minkowski algebra with signature (+,-,-,-). Index 0 is x^0 = c t.
//
// Storage carries no index position; each function documents whether it
// expects or returns contravariant (upper) or covariant (lower) components.
// Unless stated otherwise tensors are contravariant.

namespace ret14 {

struct FourVector {
  std::array<double, 4> x{};

  double& operator[](std::size_t i) { return x[i]; }
  double operator[](std::size_t i) const { return x[i]; }

  FourVector& operator+=(const FourVector& o);
  FourVector& operator-=(const FourVector& o);
  FourVector& operator*=(double s);
};

FourVector operator+(FourVector a, const FourVector& b);
FourVector operator-(FourVector a, const FourVector& b);
FourVector operator*(double s, FourVector a);

// General 4x4 array; for velocity gradients m[alpha][beta] = d_alpha U^beta.
using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Symmetric rank-2 tensor, 10 packed components.
class SymTensor2 {
 public:
  static constexpr std::size_t index(std::size_t i, std::size_t j) {
    if (i > j) return index(j, i);
    // rows 0..3 of the upper triangle: offsets 0, 4, 7, 9
    return i * 4 - i * (i - 1) / 2 + (j - i);
  }

  double operator()(std::size_t i, std::size_t j) const { return v_[index(i, j)]; }
  double& operator()(std::size_t i, std::size_t j) { return v_[index(i, j)]; }

  const std::array<double, 10>& packed() const { return v_; }

  SymTensor2& operator+=(const SymTensor2& o);
  SymTensor2& operator-=(const SymTensor2& o);
  SymTensor2& operator*=(double s);

  static SymTensor2 outer(const FourVector& a, const FourVector& b);  // (a b + b a)/2
  static SymTensor2 from_matrix_symmetrized(const Matrix4& m);        // (m + m^T)/2

 private:
  std::array<double, 10> v_{};
};

SymTensor2 operator+(SymTensor2 a, const SymTensor2& b);
SymTensor2 operator-(SymTensor2 a, const SymTensor2& b);
SymTensor2 operator*(double s, SymTensor2 a);

/// Rank-3 tensor symmetric in its last pair: T^{alpha (beta gamma)}.
/// Stored as four packed SymTensor2 slices, one per alpha.
class Rank3 {
 public:
  double operator()(std::size_t a, std::size_t b, std::size_t c) const { return s_[a](b, c); }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) { return s_[a](b, c); }

  const SymTensor2& slice(std::size_t a) const { return s_[a]; }
  SymTensor2& slice(std::size_t a) { return s_[a]; }

  Rank3& operator+=(const Rank3& o);
  Rank3& operator*=(double s);

 private:
  std::array<SymTensor2, 4> s_{};
};

// --- metric utilities -------------------------------------------------------

inline constexpr std::array<double, 4> kMetricDiag{1.0, -1.0, -1.0, -1.0};

inline double metric(std::size_t a, std::size_t b) { return a == b ? kMetricDiag[a] : 0.0; }

// Index lowering/raising (identical for a diagonal +-1 metric).
FourVector lower(const FourVector& v);
FourVector raise(const FourVector& v);
SymTensor2 lower(const SymTensor2& t);
SymTensor2 raise(const SymTensor2& t);

SymTensor2 metric_tensor();

// g_{ab} u^a v^b for contravariant u, v.
double dot(const FourVector& u, const FourVector& v);
// g_{ab} M^{ab}
double trace(const SymTensor2& m);
// M^{ab} N^{cd} g_{ac} g_{bd}
double full_contract(const SymTensor2& m, const SymTensor2& n);
// M^{ab} u_a v_b with contravariant u, v (lowered internally).
double contract(const SymTensor2& m, const FourVector& u, const FourVector& v);
// M^{ab} u_b
FourVector contract(const SymTensor2& m, const FourVector& u);

// --- four-velocity ----------------------------------------------------------

// Rest-frame four-velocity (c, 0, 0, 0).
FourVector rest_velocity(double c);
// U = Gamma (c, v) for an arbitrary three-velocity |v| < c.
FourVector velocity_from_three(const std::array<double, 3>& v, double c);
// Throws NormalizationError unless |U.U - c^2| <= tol * (U^0)^2.
void check_normalized(const FourVector& U, double c, double tol = 1e-12);

/// h^{ab} = U^a U^b / c^2 - g^{ab}. Throws NormalizationError for an
/// unnormalized U.
///
/// With this signature the mixed form h^a_b = U^a U_b / c^2 - delta^a_b has
/// trace -3 and squares to -h^a_b; h^{ab} h_{ab} = 3.
SymTensor2 projector(const FourVector& U, double c);

// h^a_b as a 4x4 array m[a][b].
Matrix4 projector_mixed(const FourVector& U, double c);

// M^<ab> = M^ab - (1/4) g^ab g_mn M^mn
SymTensor2 deviatoric4(const SymTensor2& m);
// M^<ab>_3 = (h^a_m h^b_n - (1/3) h^ab h_mn) M^mn
SymTensor2 deviatoric3(const SymTensor2& m, const FourVector& U, double c);

// --- Lorentz boosts ---------------------------------------------------------

// Lambda^a_b for a boost with velocity v along x.
Matrix4 boost_x(double v, double c);
FourVector transform(const Matrix4& lambda, const FourVector& v);
SymTensor2 transform(const Matrix4& lambda, const SymTensor2& t);
Rank3 transform(const Matrix4& lambda, const Rank3& t);

// --- physical tensors -------------------------------------------------------

struct EquilibriumTensors {
  FourVector V;   // rho U^a
  SymTensor2 T;   // p h^ab + e U^a U^b / c^2
  Rank3 A;        // A_E^{a<bc>}
};

/// a U^a (h^bc + 3 U^b U^c / c^2) + b (h^ac U^b + h^ab U^c): the deviatoric
/// equilibrium triple tensor. Not symmetric in all three indices.
Rank3 triple_tensor(double a, double b, const FourVector& U, double c);

/// Fully symmetric abar U^a U^b U^c + bbar (h^ab U^c + h^ac U^b + h^bc U^a).
Rank3 triple_tensor_symmetric(double abar, double bbar, const FourVector& U, double c);

// A^{a<bc>} = A^{abc} - (1/4) g^{bc} g_{mn} A^{amn}
Rank3 deviatoric_last_pair(const Rank3& t);

EquilibriumTensors assemble_equilibrium_tensors(double rho, double p, double e, double a, double b,
                                                const FourVector& U, double c);

/// Non-equilibrium fields (contravariant): heat flux q^a, shear stress
/// t^<ab>_3, dynamical pressure pi.
struct NoneqFields {
  FourVector q;
  SymTensor2 t;
  double pi = 0.0;

  // Throws ValidationError when q.U != 0, t.U != 0 or g t != 0 beyond tol
  // (relative to |q|, |t| magnitudes times c).
  void validate(const FourVector& U, double c, double tol = 1e-10) const;
};

struct ProductionCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
};

/// I^<bc> = a1 (U^b q^c + U^c q^b) + a2 t^bc + a3 pi (U^b U^c - c^2 g^bc / 4).
/// Validates the fields first.
SymTensor2 assemble_production(const ProductionCoefficients& prod, const NoneqFields& fields,
                               const FourVector& U, double c);

/// sigma = -(q^a/T^2)(d_a T - (T/c^2) Udot_a) + (1/T)(t^ab d_a U_b - pi d_a U^a).
/// grad_T is covariant (d_a T), grad_U[a][b] = d_a U^b, U_dot contravariant.
double entropy_production(double T, const NoneqFields& fields, const FourVector& grad_T,
                          const Matrix4& grad_U, const FourVector& U_dot, double c);

}  // namespace ret14
