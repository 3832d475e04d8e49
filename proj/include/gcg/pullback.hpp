#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcg/courant.hpp"

namespace gcg {

// S ⊂ M given by a polynomial embedding ι: R^s → R^m in parameters u_1..u_s.
// Quantities along S are polynomials in u.
struct SubmanifoldData {
  int ambient_dim = 0;
  int dim = 0;
  std::vector<Poly> embedding;    // ι^i(u)
  PMatrix tangent;                // m×s Jacobian, columns span TS
  std::vector<PVector> conormal;  // frame of K = N*S = Ann(TS)
  std::vector<int> chart_rows;    // s rows of the Jacobian with constant nonzero minor
  PMatrix f;                      // F on S
  PForm h;                        // ambient twist H

  // Checks rank, the conormal count, F antisymmetric and dF = ι*H exactly.
  static SubmanifoldData make(std::vector<Poly> embedding, int param_dim, PMatrix f = {}, PForm h = {});
  // Affine subspace p0 + span(directions).
  static SubmanifoldData affine(const CVector& p0, const std::vector<CVector>& directions, PMatrix f = {},
                                PForm h = {});

  Poly restrict(const Poly& p) const;
  PVector restrict(const PVector& v) const;
  PSection restrict(const PSection& v) const;
  PMatrix restrict(const PMatrix& m) const;
  // dι Y.
  PVector push(const PVector& y) const;
  // Y with dι Y = X, for X tangent to S.
  PVector pull_vector(const PVector& x) const;
  // ι*ξ = dιᵀ ξ.
  PVector pull_covector(const PVector& xi) const;
  // Parameter point to ambient point.
  Point image(std::span<const Complex> u) const;
};

PForm pullback_form(const SubmanifoldData& s, const PForm& phi);

struct PullbackResult {
  std::vector<PSection> frame;  // ι*L ⊂ TS ⊕ T*S
  int generic_rank = 0;         // rank of L ∩ K⊥
  std::vector<int> ranks;       // rank of L ∩ K⊥ at each sample
  // The frame spans ι*L generically; its rank at each sample is reported.
  std::vector<int> frame_ranks;
  PForm h;                      // ι*H
  std::vector<TensorEntry> tensor;
};
// ι*L = (L ∩ K⊥ + K)/K. DomainError when the rank of L ∩ K⊥ jumps at a sample.
PullbackResult pullback_dirac(const std::vector<PSection>& l, const SubmanifoldData& s,
                              const std::vector<Point>& samples = {});

// τ = {X + η ∈ TS ⊕ T*M|_S : ι*η = i_X F}: lifts of ∂_{u_a}, then the conormals.
struct GeneralizedTangent {
  std::vector<PSection> frame;
};
GeneralizedTangent generalized_tangent(const SubmanifoldData& s);

struct BraneReport {
  bool compatible = false;
  // First failure of J(τ) ⊂ τ: i = τ frame index, k = τ frame index, value = 2<Jτ_i, τ_k>.
  std::optional<TensorEntry> violation;
  std::vector<PVector> delta;  // π J(N*S), ambient components along S
  int delta_rank = 0;          // generic
  bool coisotropic = false;    // π J(N*S) ⊂ TS
  bool lagrangian = false;     // Δ = TS
  bool space_filling = false;  // S = M
  // Induced complex structure on TS when Δ = 0 (complex and space-filling cases).
  std::optional<PMatrix> induced_j;
  bool f_type_11 = false;  // F(IX, IY) = F(X, Y)
  // Symplectic ambient J_ω with Δ = 0: σ = F + iι*ω with σ(IX, ·) = sign·i σ(X, ·)
  // and σ of rank dim S / 2.
  std::optional<PMatrix> holomorphic_form;
  int holomorphic_sign = 0;
  // Coisotropic ambient symplectic: i_X(F + iι*ω) = 0 for X ∈ Δ.
  bool basic = false;
  std::vector<int> delta_ranks;               // rank of Δ at each sample
  std::vector<std::vector<CGenVector>> ell;   // ker(J - i) ∩ τ ⊗ C at each sample
};
BraneReport brane_check(const GCField& j, const SubmanifoldData& s, const std::vector<Point>& samples = {});

// e^B as a polynomial matrix on T ⊕ T*: X + ξ ↦ X + ξ + i_X B.
PMatrix b_transform_matrix(const PMatrix& b);

}  // namespace gcg
