#pragma once

#include <optional>
#include <vector>

#include "gcg/clifford.hpp"
#include "gcg/linalg.hpp"

namespace gcg {

using CGenVector = GenVector<Complex>;
using CForm = Form<Complex>;

// Maximal isotropic subspace L of (V ⊕ V*) ⊗ C in the form L(Δ, ε).
class MaxIsotropic {
 public:
  // Validates isotropy and rank; throws ValidationError naming the offending pair.
  static MaxIsotropic from_basis(const std::vector<CGenVector>& basis);

  int dim() const { return dim_; }
  int type() const { return dim_ - static_cast<int>(delta_.size()); }
  int parity() const { return type() % 2; }
  const std::vector<CGenVector>& basis() const { return basis_; }
  // Rows of a reduced basis of Δ = π_V L.
  const std::vector<CVector>& delta() const { return delta_; }
  // ε(δ_a, δ_b) on the Δ basis above.
  const CMatrix& eps() const { return eps_; }
  // Reduced basis of Ann(Δ) = L ∩ V*.
  const std::vector<CVector>& annihilator() const { return ann_; }

  // Basis of L(Δ, ε) rebuilt from the canonical data only.
  std::vector<CGenVector> reconstruct() const;
  bool is_real() const;
  bool contains(const CGenVector& v) const;
  MaxIsotropic conj() const;

  friend bool operator==(const MaxIsotropic& a, const MaxIsotropic& b);

 private:
  int dim_ = 0;
  std::vector<CGenVector> basis_;
  std::vector<CVector> delta_;
  CMatrix eps_;
  std::vector<CVector> ann_;
};

// Validation error with the index pair that broke isotropy, if any.
struct IsotropyViolation {
  int i = -1;
  int j = -1;
  Complex value;
  int rank = 0;
};
std::optional<IsotropyViolation> find_isotropy_violation(const std::vector<CGenVector>& basis);

std::vector<CVector> flat_rows(const std::vector<CGenVector>& vs);
bool same_subspace(const std::vector<CGenVector>& a, const std::vector<CGenVector>& b);

// Pure spinor exp(B)∧θ_1∧…∧θ_k, B extending -ε by zero off Δ.
CForm pure_spinor(const MaxIsotropic& l);

struct NullSpace {
  std::vector<CGenVector> basis;
  bool pure = false;
};
NullSpace null_space(const CForm& phi);
// Null space as a MaxIsotropic; throws ValidationError if phi is not pure.
MaxIsotropic null_space_isotropic(const CForm& phi);

// Projective equality of two spinors: a = c b for a nonzero scalar c.
bool proportional(const CForm& a, const CForm& b, Complex* ratio = nullptr);

// Dual description L(F, γ) with F = π_{V*} L and a bivector witness β such
// that exp(β)·(f_1∧…∧f_s) spans the spinor line of L.
struct CotangentGraph {
  std::vector<CVector> F;   // reduced basis of π_{V*} L
  CMatrix gamma;            // γ(f_a, f_b)
  CMatrix beta;             // bivector components β[i][j]
  CForm spinor;
};
CotangentGraph graph_over_cotangent(const MaxIsotropic& l);

MaxIsotropic transform(const MaxIsotropic& l, const Transform& t);

// {X + ξ + η : X + ξ ∈ L1, X + η ∈ L2}.
MaxIsotropic tensor_product(const MaxIsotropic& a, const MaxIsotropic& b);

// L^T = {X - ξ : X + ξ ∈ L}.
MaxIsotropic transpose(const MaxIsotropic& l);

int intersection_dim(const MaxIsotropic& a, const MaxIsotropic& b);

// Graph of a 2-form B, {X + i_X B}.
MaxIsotropic graph_of_two_form(const CMatrix& b);
// Graph of a bivector β, {ξ + i_ξ β}.
MaxIsotropic graph_of_bivector(const CMatrix& beta);
// Δ ⊕ Ann(Δ) for Δ spanned by the given vectors.
MaxIsotropic distribution_plus_annihilator(int dim, const std::vector<CVector>& delta);
MaxIsotropic tangent_space(int dim);
MaxIsotropic cotangent_space(int dim);

// Basis of a complement: standard basis vectors at the non-pivot columns of
// the reduced rows.
std::vector<int> complement_columns(const std::vector<CVector>& reduced_rows, int width);
// Components S = Q^T N Q of a 2-form given by N on the basis whose dual
// covectors are the rows of Q.
CMatrix change_two_form_basis(const CMatrix& n, const CMatrix& q);

}  // namespace gcg
