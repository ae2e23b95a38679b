#pragma once

// Every (−1)^k factor in the dΦ_r computation, in one place.
//
//   restriction   Φ_r|Γ_t = (−1)^{n−1} σ_r dvol_Γt          dvol_Γt(e_1..e_{n-1}) = dvol_M(e_n,e_1..e_{n-1})
//   stokes        M_r(Γ_1) − M_r(Γ_0) = (−1)^{n−1} ∫_M dΦ_r
//   first_term    dΦ_r ∋ (−1)^{n−1} (r+1) Φ_{r+1} ∧ θ^n
//   curvature     dΦ_r ∋ (−1)^{r−1} Σ ε ω∧…∧ω∧Ω^{i_r}_n∧θ∧…∧θ
//   a_partition   A = (−1)^{n−r−1} Σ κ…κ K_{i_r n}
//   b_partition   B = (−1)^{n−r}   Σ κ…κ (|∇u|_{i_{r−1}}/|∇u|) R_{i_r i_{r−1} i_r n}
//
// The integrand of the comparison formula carries stokes·curvature·a = −1 on
// the A term and stokes·curvature·b = +1 on the B term.

namespace totcurv::signs {

constexpr int power_of_minus_one(int k) { return (k % 2 == 0) ? 1 : -1; }

constexpr int restriction(int n) { return power_of_minus_one(n - 1); }
constexpr int stokes(int n) { return power_of_minus_one(n - 1); }
constexpr int first_term(int n) { return power_of_minus_one(n - 1); }
constexpr int curvature(int r) { return power_of_minus_one(r - 1); }
constexpr int a_partition(int n, int r) { return power_of_minus_one(n - r - 1); }
constexpr int b_partition(int n, int r) { return power_of_minus_one(n - r); }

constexpr int main_a(int n, int r) { return stokes(n) * curvature(r) * a_partition(n, r); }
constexpr int main_b(int n, int r) { return stokes(n) * curvature(r) * b_partition(n, r); }

static_assert(main_a(3, 1) == -1 && main_a(4, 2) == -1 && main_a(5, 4) == -1);
static_assert(main_b(3, 2) == +1 && main_b(4, 3) == +1 && main_b(6, 2) == +1);

} // namespace totcurv::signs
