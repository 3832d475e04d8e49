#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcg/gc_linear.hpp"

namespace gcg {

using PForm = Form<Poly>;
using PSection = GenVector<Poly>;
using Point = std::vector<Complex>;

// Polynomial chart on R^m. Complex pairs (a, b) declare z = x_a + i x_b.
class Chart {
 public:
  Chart() = default;
  Chart(std::vector<std::string> names, std::vector<std::pair<int, int>> pairs = {},
        std::vector<std::string> complex_names = {});
  static Chart real(int m);
  // x1, y1, ..., xn, yn with z_j = x_j + i y_j.
  static Chart complex(int n);

  int dim() const { return static_cast<int>(names_.size()); }
  int complex_dim() const { return static_cast<int>(pairs_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  const std::vector<std::string>& complex_names() const { return complex_names_; }

  Poly var(int i) const;
  Poly z(int j) const;
  Poly zbar(int j) const;
  PForm dz(int j) const;
  PForm dzbar(int j) const;
  // ∂/∂z_j = (∂x - i∂y)/2 and ∂/∂z̄_j = (∂x + i∂y)/2.
  PVector d_dz(int j) const;
  PVector d_dzbar(int j) const;
  // dz_1 ∧ ... ∧ dz_n.
  PForm holomorphic_volume() const;

  // Scalar grammar over the real names, the complex names and their
  // conjugates (name + "bar").
  Poly parse(const std::string& text) const;
  // Real coordinates of the point with the given complex coordinates.
  Point point_from_complex(const std::vector<Complex>& zs) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::string> complex_names_;
};

CForm eval(const PForm& phi, std::span<const Complex> p);
CGenVector eval(const PSection& s, std::span<const Complex> p);
PForm to_poly(const CForm& phi);
PSection to_poly(const CGenVector& v);
PSection section(const PVector& x, const PVector& xi);

// Coefficients of a 1-form / vector as a list.
PVector linear_part(const PForm& f);

Poly apply_vector(const PVector& x, const Poly& f);
PVector lie_bracket(const PVector& x, const PVector& y);
PForm exterior_d(const PForm& phi);
PForm d_H(const PForm& phi, const PForm& h);
PForm lie_derivative(const PVector& x, const PForm& phi);
PForm differential(const Poly& f, int m);

// Real 3-form with dH = 0 checked exactly.
class ClosedThreeForm {
 public:
  static ClosedThreeForm validate(const PForm& h);
  static ClosedThreeForm zero(int m);
  const PForm& form() const { return h_; }

 private:
  PForm h_;
};

// [X+ξ, Y+η]_H = [X,Y] + L_X η - i_Y dξ + i_X i_Y H. H may be any 3-form
// (or the zero form) so the anomaly for non-closed H can be observed.
PSection courant_bracket(const PSection& a, const PSection& b, const PForm& h);
// [[d_H, a·], b·]φ with graded commutators.
PForm derived_bracket_act(const PSection& a, const PSection& b, const PForm& h, const PForm& phi);

// m polynomial sections, pairwise orthogonal identically, rank m at samples.
struct DiracFrame {
  std::vector<PSection> sections;
  std::vector<Point> samples;

  static DiracFrame validate(std::vector<PSection> sections, std::vector<Point> samples = {});
  int dim() const { return sections.empty() ? 0 : sections.front().dim(); }
};

struct TensorEntry {
  int i, j, k;
  Poly value;
};
// Nonzero <[e_i, e_j], e_k> for i < j < k.
std::vector<TensorEntry> involutivity_tensor(const std::vector<PSection>& frame, const PForm& h);

struct IntegrabilityResult {
  enum class Verdict { pass, inconsistent, bound_exhausted };
  Verdict verdict = Verdict::bound_exhausted;
  PSection witness;                // d_Hφ = witness·φ when passing
  bool witness_in_conjugate = false;  // witness annihilates φ̄
  bool supplied_witness_failed = false;
  int degree_bound = 0;
  std::optional<Point> point;      // sample point with no pointwise solution
  PForm residual;                  // d_Hφ - witness·φ of the best attempt
  CForm point_residual;
};
int default_degree_bound(const PForm& phi, const PForm& h);
IntegrabilityResult check_spinor_integrability(const PForm& phi, const PForm& h,
                                               const std::optional<PSection>& witness,
                                               std::optional<int> degree_bound,
                                               const std::vector<Point>& samples);

// Generalized almost complex structure with polynomial entries, validated as
// polynomial identities.
class GCField {
 public:
  static GCField validate(const PMatrix& j);
  static std::optional<std::string> violation(const PMatrix& j);
  const PMatrix& matrix() const { return j_; }
  int dim() const { return j_.rows() / 2; }
  GCStructure at(std::span<const Complex> p) const;
  PMatrix poisson() const;
  // Polynomial frame of the +i eigenbundle.
  std::vector<PSection> eigenframe() const;
  PSection apply(const PSection& v) const;

 private:
  PMatrix j_;
};

// J_ω for a polynomial ω whose Pfaffian is a nonzero constant.
PMatrix j_symplectic_field(const PMatrix& omega);

struct NijenhuisEntry {
  int a, b;
  PSection value;
};
// Nonzero N_J(e_a, e_b) on the coordinate frame of T ⊕ T*.
std::vector<NijenhuisEntry> nijenhuis_field(const GCField& s, const PForm& h);

// Schouten bracket of multivector fields, [X, f] = X(f).
PForm schouten(const PForm& a, const PForm& b);
PForm bivector_field(const PMatrix& beta);

// Lie algebroid with a basis b_a: anchor and structure functions
// [b_a, b_b] = sum_c structure[a][b][c] b_c.
struct LieAlgebroid {
  int rank = 0;
  int base_dim = 0;
  std::vector<PVector> anchor;
  std::vector<std::vector<PVector>> structure;

  static LieAlgebroid tangent(int m);
};
// Differential on Λ•A*, generator a = dual basis element.
PForm algebroid_d(const LieAlgebroid& a, const PForm& mu);
// Schouten extension of the bracket to Λ•A, generator a = b_a.
PForm algebroid_bracket(const LieAlgebroid& a, const PForm& p, const PForm& q);

// Transverse Dirac structures L, L' with L' ≅ L* through the pairing
// 2<,>. dual[a] ∈ L' satisfies 2<dual[a], l[b]> = δ_ab.
struct DiracPair {
  std::vector<PSection> l;
  std::vector<PSection> dual;
  PForm h;
  LieAlgebroid algebroid_l;
  LieAlgebroid algebroid_dual;
};
DiracPair make_dirac_pair(const std::vector<PSection>& l, const std::vector<PSection>& complement, const PForm& h,
                          const std::vector<Point>& samples = {});
// Frames T_{0,1} ⊕ T*_{1,0} and T_{1,0} ⊕ T*_{0,1} of a complex chart.
std::pair<std::vector<PSection>, std::vector<PSection>> complex_frames(const Chart& c);

PForm lie_algebroid_differential(const DiracPair& p, const PForm& mu);
PForm lie_algebroid_bracket(const DiracPair& p, const PForm& a, const PForm& b);
// ε(e_a, e_b) = β(ξ_a, ξ_b) + B(X_a, X_b) as an element of Λ²L*.
PForm dual_two_form(const DiracPair& p, const PMatrix& beta, const PMatrix& b);
// Frame e_a + ε(e_a, ·) of the graph L_ε.
std::vector<PSection> graph_frame(const DiracPair& p, const PForm& eps);

struct MaurerCartanResult {
  bool pass = false;
  PForm d_eps;
  PForm bracket;
  PForm residual;  // d_L ε + ½[ε, ε]
};
MaurerCartanResult maurer_cartan(const DiracPair& p, const PForm& eps);

struct Deformation {
  PMatrix j;
  PForm spinor;
};
// e^{β+β̄} J_J e^{-(β+β̄)} for the standard complex structure of the chart
// and a bivector β of type (2,0); spinor e^β·Ω.
Deformation deform_by_bivector(const Chart& c, const PMatrix& beta);
// Pointwise graph deformation L_ε = (1 + ε)L for ε ∈ Λ²L* given on the
// eigenbundle basis of s; DomainError when A_ε is singular.
GCStructure deform_point(const GCStructure& s, const CMatrix& eps);

// X with dφ + df∧φ = X·φ, φ = e^β·v, i.e. the modular field of e^f v.
PVector modular_vector_field(const PForm& beta, const PForm& volume, const Poly& log_factor, int degree_bound = 3);

struct HamiltonianResult {
  PSection df;
  bool symmetry = false;
  std::vector<TensorEntry> failures;  // i = frame index, k = frame index, value = 2<[Df, e_i], e_k>
};
HamiltonianResult hamiltonian_symmetry(const Poly& f, const GCField& s, const PForm& h);

// Monomials in n variables of total degree <= d.
std::vector<Monomial> monomials_up_to(int n, int d);

}  // namespace gcg
