#pragma once

// Alternating forms at a point, wedge products evaluated by shuffle sums, and
// a central-difference exterior derivative of coordinate form fields.

#include "totcurv/common.hpp"

#include <functional>
#include <span>

namespace totcurv {

// Sign of the sequence as a permutation of its sorted self: +1 even, -1 odd,
// 0 when an entry repeats.
int perm_sign(std::span<const int> indices);

// Sign of (i_1 … i_r, n, i_{r+1} … i_{n-1}), the permutation of 1..n−1 with n
// inserted right after slot r, computed as (−1)^{n−1−r} ε(i_1 … i_{n−1}).
// `indices` must be a permutation of 1..n−1 and 1 <= r <= n−1.
int epsilon_move_to_slot(std::span<const int> indices, int r);

// A k-form on one tangent space, known only through its values.
class AlternatingForm {
public:
    using Evaluator = std::function<double(std::span<const Vec>)>;

    AlternatingForm(int degree, Evaluator eval);

    int degree() const { return degree_; }
    double operator()(std::span<const Vec> vectors) const;

    static AlternatingForm constant(double value);   // 0-form
    static AlternatingForm covector(const Vec& row); // 1-form v ↦ row·v

private:
    int degree_;
    Evaluator eval_;
};

// (λ∧φ)(v_1 … v_{k+l}) = Σ ε(i_1 … i_{k+l}) λ(v_{i_1} … v_{i_k}) φ(v_{i_{k+1}} … v_{i_{k+l}})
// over i_1<…<i_k and i_{k+1}<…<i_{k+l}.
double wedge_eval(const AlternatingForm& lambda, const AlternatingForm& phi,
                  std::span<const Vec> vectors);

AlternatingForm wedge(const AlternatingForm& lambda, const AlternatingForm& phi);
AlternatingForm wedge(std::span<const AlternatingForm> factors);

// Strictly increasing multi-indices of length k from {0..n-1}, in
// lexicographic order. This is the coefficient order of FormField.
std::vector<std::vector<int>> increasing_multi_indices(int n, int k);

// A k-form field on a chart, given by its coordinate coefficients
// α_I, I increasing, so that α = Σ_I α_I dx^I.
struct FormField {
    int dim;
    int degree;
    Box domain;
    std::function<std::vector<double>(const Vec&)> coefficients;
};

// Coefficients of a pointwise form on the coordinate basis, α_I = α(∂_I).
std::vector<double> sample_coefficients(const AlternatingForm& form, int dim);

// Evaluator for coefficient data: α(v_1 … v_k) = Σ_I α_I det[v_j^{I_i}].
AlternatingForm form_from_coefficients(int dim, int degree, std::vector<double> coeffs);

struct NumericDOptions {
    double h = 0.0;           // 0 selects 1e-4 · (domain diameter)
    bool richardson = false;  // combine h and h/2 to cancel the h² term
};

// (dα)_{a_0 … a_k} = Σ_m (−1)^m ∂_{a_m} α_{a_0 … â_m … a_k}, with central
// differences. Throws DomainError when x is closer than h to the boundary.
AlternatingForm numeric_d(const FormField& field, const Vec& x, NumericDOptions opts = {});
std::vector<double> numeric_d_coefficients(const FormField& field, const Vec& x,
                                           NumericDOptions opts = {});

// The field x ↦ numeric_d(field, x), for composing d with itself.
FormField numeric_d_field(const FormField& field, NumericDOptions opts = {});

} // namespace totcurv
