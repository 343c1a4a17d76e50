#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "xyq/chain.hpp"
#include "xyq/evolve.hpp"

namespace xyq {

// Pairwise Majorana expectations <A_l A_{l+r}>, <B_l B_{l+r}>, <A_l B_{l+r}>
// at one (time, field) snapshot, for |r| <= r_max. A = c^dag + c, B = c^dag - c.
// Translation invariant: entries depend on the separation only.
class ContractionTable {
 public:
  ContractionTable(int r_max, int n_sites);

  int r_max() const { return r_max_; }
  int n_sites() const { return n_sites_; }

  std::complex<double> aa(int r) const { return at(aa_, r); }
  std::complex<double> bb(int r) const { return at(aa_, r) - (r == 0 ? 2.0 : 0.0); }
  std::complex<double> ab(int r) const { return at(ab_, r); }
  // {A_i, B_j} = 0 for all i, j, so the reversed contraction is just -ab(-r).
  std::complex<double> ba(int r) const { return -at(ab_, -r); }

  void set_aa(int r, std::complex<double> v) { at(aa_, r) = v; }
  void set_ab(int r, std::complex<double> v) { at(ab_, r) = v; }

 private:
  std::complex<double>& at(std::vector<std::complex<double>>& v, int r);
  const std::complex<double>& at(const std::vector<std::complex<double>>& v, int r) const;

  int r_max_;
  int n_sites_;
  std::vector<std::complex<double>> aa_;  // r = -r_max .. r_max
  std::vector<std::complex<double>> ab_;
};

// Builds the table from mode amplitudes extracted at field h:
//   n_k = sin^2(th/2) + |u|^2 cos th - sin th Im[vu*]
//   f_k = <c^dag_k c^dag_-k> = Re[vu*] + i(cos th Im[vu*] + (|u|^2 - 1/2) sin th)
//   aa(r) = delta_r0 + (4i/N) sum_k sin(kr) Re f_k
//   ab(r) = delta_r0 - (4/N) sum_k [cos(kr) n_k + sin(kr) Im f_k]
ContractionTable contractions(std::span<const Mode> modes,
                              std::span<const ModeState> states, double h,
                              int r_max, int n_sites);

struct MajoranaOp {
  enum class Kind { A, B };
  Kind kind;
  int site;
};

// Wick/Pfaffian evaluation of an even-length Majorana string (length <= 6):
// the Pfaffian of the antisymmetric matrix of in-order pairwise contractions.
std::complex<double> wick_string(const ContractionTable& table,
                                 std::span<const MajoranaOp> ops);

// Two-point spin correlators <s^a_l s^b_{l+r}> for r = 1, 2 and the
// transverse magnetization <s^z>.
struct SpinCorrelators {
  double mz = 0.0;
  std::array<double, 2> sxx{}, syy{}, szz{}, sxy{}, syx{};  // index r-1

  double max_imag = 0.0;  // largest imaginary residue seen during assembly
};

SpinCorrelators spin_correlators(const ContractionTable& table);

}  // namespace xyq
