#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcg/isotropic.hpp"

namespace gcg {

// Generalized complex structure on V ⊕ V* at a point, acting on (X; ξ).
class GCStructure {
 public:
  static GCStructure validate(const CMatrix& j);
  // Name of the first violated identity, or nullopt.
  static std::optional<std::string> violation(const CMatrix& j);

  const CMatrix& matrix() const { return j_; }
  int dim() const { return j_.rows() / 2; }
  CMatrix a_block() const { return j_.block(0, 0, dim(), dim()); }
  CMatrix p_block() const { return j_.block(0, dim(), dim(), dim()); }
  CMatrix sigma_block() const { return j_.block(dim(), 0, dim(), dim()); }

 private:
  CMatrix j_;
};

// Gram matrix of <,> on flattened (X; ξ): (1/2)[[0, I], [I, 0]].
CMatrix gram(int m);

// J_ω = [[0, -ω⁻¹], [ω, 0]] for the component matrix of a nondegenerate ω.
CMatrix j_symplectic(const CMatrix& omega);
// J_J = [[-J, 0], [0, J*]] for a complex structure J on V (J X = J·X).
CMatrix j_complex(const CMatrix& jc);
// Standard complex structure on R^{2k}: J ∂x_{2j-1} = ∂x_{2j}.
CMatrix standard_complex(int k);
// Standard symplectic form e^{12} + e^{34} + ... on R^{2n}.
CMatrix standard_symplectic(int n);
CMatrix direct_sum(const CMatrix& j1, const CMatrix& j2);
// t J t⁻¹ for an orthogonal transform t.
CMatrix conjugate(const CMatrix& j, const Transform& t);

MaxIsotropic eigenbundle(const GCStructure& s);
// ½ dim(T* ∩ J T*).
int type_of(const GCStructure& s);

// φ = exp(A) ∧ Ω with A = B + iω supported on the adapted complement.
struct CanonicalSpinorData {
  int k = 0;
  CForm omega_k;                 // Ω, decomposable k-form
  std::vector<CVector> theta;    // θ_1..θ_k with Ω = c θ_1∧…∧θ_k
  std::vector<CVector> delta;    // real basis of Δ = ker(Ω∧Ω̄)
  std::vector<int> n_columns;    // coordinate directions spanning N
  std::vector<CVector> adapted;  // δ^a, θ_i, θ̄_i
  CMatrix a_form;                // components of A
  CMatrix b_form() const;        // Re A
  CMatrix omega_form() const;    // Im A
  CForm generator;               // exp(A) ∧ Ω, equal to the input spinor
};

// Solves φ = exp(A)∧Ω degree by degree for A with components only of type
// (2,0,0), (1,0,1), (0,0,2) in Δ* ⊕ N*_{1,0} ⊕ N*_{0,1}.
CanonicalSpinorData extract_canonical(const CForm& phi);
CanonicalSpinorData canonical_spinor(const GCStructure& s);

// U^k component of φ: eigenvalue ik of the spin action of J.
CForm grading_project(const GCStructure& s, const CForm& phi, int k);

// Poisson bivector components P[i][j]: upper-right block read as a bivector.
CMatrix poisson_of(const GCStructure& s);

struct DarbouxData {
  int k = 0;
  CMatrix b_tilde;
  CMatrix omega0;
  std::vector<CVector> delta;
  std::vector<CVector> n_frame;
  CForm omega_k;
  bool line_equal = false;
  bool symplectic_on_delta = false;
  bool complex_on_n = false;
};
DarbouxData darboux_point(const GCStructure& s);

}  // namespace gcg
