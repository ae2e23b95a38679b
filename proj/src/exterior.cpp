#include "totcurv/exterior.hpp"

#include <algorithm>
#include <numeric>

namespace totcurv {

int perm_sign(std::span<const int> indices) {
    int sign = 1;
    const std::size_t m = indices.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            if (indices[i] == indices[j]) return 0;
            if (indices[i] > indices[j]) sign = -sign;
        }
    return sign;
}

int epsilon_move_to_slot(std::span<const int> indices, int r) {
    const int m = static_cast<int>(indices.size());  // m = n − 1
    if (r < 1 || r > m) throw DomainError("slot r out of range 1..n-1");
    std::vector<int> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < m; ++i) {
        if (sorted[i] != i + 1) throw DomainError("indices must be a permutation of 1..n-1");
    }
    // Moving n from the end to position r+1 takes n−1−r transpositions.
    const int parity = (m - r) % 2 == 0 ? 1 : -1;
    return parity * perm_sign(indices);
}

AlternatingForm::AlternatingForm(int degree, Evaluator eval)
    : degree_(degree), eval_(std::move(eval)) {
    if (degree_ < 0) throw DomainError("form degree must be non-negative");
}

double AlternatingForm::operator()(std::span<const Vec> vectors) const {
    if (static_cast<int>(vectors.size()) != degree_) {
        throw DomainError("form of degree " + std::to_string(degree_) + " given " +
                          std::to_string(vectors.size()) + " vectors");
    }
    return eval_(vectors);
}

AlternatingForm AlternatingForm::constant(double value) {
    return AlternatingForm(0, [value](std::span<const Vec>) { return value; });
}

AlternatingForm AlternatingForm::covector(const Vec& row) {
    return AlternatingForm(1, [row](std::span<const Vec> v) { return row.dot(v[0]); });
}

double wedge_eval(const AlternatingForm& lambda, const AlternatingForm& phi,
                  std::span<const Vec> vectors) {
    const int k = lambda.degree();
    const int l = phi.degree();
    if (static_cast<int>(vectors.size()) != k + l) {
        throw DomainError("wedge evaluated on a tuple of the wrong length");
    }
    const int m = k + l;
    std::vector<int> order(m);
    std::vector<Vec> first(k), second(l);
    double total = 0.0;
    // Enumerate increasing k-subsets by a selection mask in lexicographic order.
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        int a = 0, b = k;
        for (int i = 0; i < m; ++i) {
            if (pick[i]) order[a++] = i;
            else order[b++] = i;
        }
        for (int i = 0; i < k; ++i) first[i] = vectors[order[i]];
        for (int i = 0; i < l; ++i) second[i] = vectors[order[k + i]];
        total += perm_sign(order) * lambda(first) * phi(second);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return total;
}

AlternatingForm wedge(const AlternatingForm& lambda, const AlternatingForm& phi) {
    return AlternatingForm(lambda.degree() + phi.degree(),
                           [lambda, phi](std::span<const Vec> v) { return wedge_eval(lambda, phi, v); });
}

AlternatingForm wedge(std::span<const AlternatingForm> factors) {
    if (factors.empty()) return AlternatingForm::constant(1.0);
    AlternatingForm out = factors.back();
    for (std::size_t i = factors.size() - 1; i-- > 0;) out = wedge(factors[i], out);
    return out;
}

std::vector<std::vector<int>> increasing_multi_indices(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<double> sample_coefficients(const AlternatingForm& form, int dim) {
    const auto multi = increasing_multi_indices(dim, form.degree());
    std::vector<double> coeffs;
    coeffs.reserve(multi.size());
    std::vector<Vec> basis(form.degree());
    for (const auto& I : multi) {
        for (int i = 0; i < form.degree(); ++i) basis[i] = Vec::Unit(dim, I[i]);
        coeffs.push_back(form(basis));
    }
    return coeffs;
}

AlternatingForm form_from_coefficients(int dim, int degree, std::vector<double> coeffs) {
    auto multi = increasing_multi_indices(dim, degree);
    if (coeffs.size() != multi.size()) throw DomainError("coefficient count mismatch");
    return AlternatingForm(degree, [degree, multi = std::move(multi),
                                    coeffs = std::move(coeffs)](std::span<const Vec> v) {
        if (degree == 0) return coeffs[0];
        Mat minor(degree, degree);
        double total = 0.0;
        for (std::size_t c = 0; c < multi.size(); ++c) {
            if (coeffs[c] == 0.0) continue;
            for (int i = 0; i < degree; ++i)
                for (int j = 0; j < degree; ++j) minor(i, j) = v[j][multi[c][i]];
            total += coeffs[c] * minor.determinant();
        }
        return total;
    });
}

namespace {

std::vector<double> central_d(const FormField& field, const Vec& x, double h) {
    const int n = field.dim;
    const int k = field.degree;
    const auto lower = increasing_multi_indices(n, k);
    const auto upper = increasing_multi_indices(n, k + 1);

    // ∂_a α_I for every coordinate a and every I.
    std::vector<std::vector<double>> partial(n);
    for (int a = 0; a < n; ++a) {
        Vec xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const auto cp = field.coefficients(xp);
        const auto cm = field.coefficients(xm);
        partial[a].resize(lower.size());
        for (std::size_t i = 0; i < lower.size(); ++i) partial[a][i] = (cp[i] - cm[i]) / (2.0 * h);
    }
    auto lower_position = [&](const std::vector<int>& I) {
        return static_cast<std::size_t>(
            std::lower_bound(lower.begin(), lower.end(), I) - lower.begin());
    };

    std::vector<double> out(upper.size(), 0.0);
    std::vector<int> rest(k);
    for (std::size_t u = 0; u < upper.size(); ++u) {
        const auto& J = upper[u];
        double s = 0.0;
        for (int m = 0; m <= k; ++m) {
            int w = 0;
            for (int i = 0; i <= k; ++i)
                if (i != m) rest[w++] = J[i];
            const double term = partial[J[m]][lower_position(rest)];
            s += (m % 2 == 0) ? term : -term;
        }
        out[u] = s;
    }
    return out;
}

} // namespace

std::vector<double> numeric_d_coefficients(const FormField& field, const Vec& x,
                                           NumericDOptions opts) {
    if (field.degree >= field.dim) return std::vector<double>{};
    const double h = opts.h > 0.0 ? opts.h : field.domain.diameter() * 1e-4;
    if (!field.domain.contains(x, h)) {
        throw DomainError("numeric_d: point within one step of the chart boundary");
    }
    auto coarse = central_d(field, x, h);
    if (!opts.richardson) return coarse;
    const auto fine = central_d(field, x, 0.5 * h);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return coarse;
}

AlternatingForm numeric_d(const FormField& field, const Vec& x, NumericDOptions opts) {
    if (field.degree >= field.dim) {
        throw DomainError("numeric_d: field degree must be below the dimension");
    }
    return form_from_coefficients(field.dim, field.degree + 1,
                                  numeric_d_coefficients(field, x, opts));
}

FormField numeric_d_field(const FormField& field, NumericDOptions opts) {
    return FormField{field.dim, field.degree + 1, field.domain,
                     [field, opts](const Vec& x) { return numeric_d_coefficients(field, x, opts); }};
}

} // namespace totcurv
