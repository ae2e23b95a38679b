#include "totcurv/chernforms.hpp"

#include "totcurv/signs.hpp"

#include <cmath>

namespace totcurv {

namespace {

void check_r(int n, int r) {
    if (r < 0 || r > n - 1) throw DomainError("r must lie in 0..n-1");
}

// Strictly increasing subsets of {0..m-1} of size k, each with its sorted
// complement, i.e. the index splits of the Φ_r sum.
struct Split {
    std::vector<int> head;
    std::vector<int> tail;
};

std::vector<Split> splits(int m, int k) {
    std::vector<Split> out;
    for (const auto& head : increasing_multi_indices(m, k)) {
        Split s{head, {}};
        for (int i = 0, h = 0; i < m; ++i) {
            if (h < k && head[h] == i) ++h;
            else s.tail.push_back(i);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

NormalConnection normal_connection(const PrincipalFrame& frame) {
    const int n = frame.dim();
    NormalConnection conn{frame.theta, Mat(n - 1, n)};
    for (int i = 0; i < n - 1; ++i) {
        conn.omega.row(i) = frame.kappa[i] * frame.theta.row(i) +
                            frame.grad_norm_tangential[i] / frame.grad_norm * frame.theta.row(n - 1);
    }
    return conn;
}

AlternatingForm phi_form(const NormalConnection& conn, int r) {
    const int n = static_cast<int>(conn.theta.rows());
    check_r(n, r);
    std::vector<std::pair<int, AlternatingForm>> terms;
    for (const auto& s : splits(n - 1, r)) {
        std::vector<AlternatingForm> factors;
        for (int i : s.head) factors.push_back(AlternatingForm::covector(conn.omega.row(i)));
        for (int i : s.tail) factors.push_back(AlternatingForm::covector(conn.theta.row(i)));
        terms.emplace_back(perm_sign(concat(s.head, s.tail)), wedge(factors));
    }
    return AlternatingForm(n - 1, [terms = std::move(terms)](std::span<const Vec> v) {
        double total = 0.0;
        for (const auto& [sign, form] : terms) total += sign * form(v);
        return total;
    });
}

double phi_eval(const NormalConnection& conn, int r, std::span<const Vec> vectors) {
    const int n = static_cast<int>(conn.theta.rows());
    if (static_cast<int>(vectors.size()) != n - 1) throw DomainError("phi_eval needs n-1 vectors");
    return phi_form(conn, r)(vectors);
}

double phi_eval(const PrincipalFrame& frame, int r, std::span<const Vec> vectors) {
    return phi_eval(normal_connection(frame), r, vectors);
}

double phi_restricted_density(const PrincipalFrame& frame, int r) {
    check_r(frame.dim(), r);
    return signs::restriction(frame.dim()) * sigma_r(frame.kappa, r);
}

AlternatingForm curvature_form(const PrincipalFrame& frame, const FrameCurvature& curv, int i) {
    const int n = frame.dim();
    Mat coeff(n, n);  // Ω^i_n(e_l, e_k) = R_{l k i n}
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) coeff(l, k) = curv.R(l, k, i, n - 1);
    return AlternatingForm(2, [theta = frame.theta, coeff](std::span<const Vec> v) {
        const Vec a = theta * v[0];
        const Vec b = theta * v[1];
        return a.dot(coeff * b);
    });
}

double dphi_formula_eval(const PrincipalFrame& frame, const FrameCurvature& curv, int r,
                         std::span<const Vec> vectors) {
    const int n = frame.dim();
    check_r(n, r);
    if (static_cast<int>(vectors.size()) != n) throw DomainError("dphi_formula_eval needs n vectors");
    const NormalConnection conn = normal_connection(frame);
    const AlternatingForm theta_n = AlternatingForm::covector(conn.theta.row(n - 1));

    double first = 0.0;
    if (r + 1 <= n - 1) {
        first = signs::first_term(n) * (r + 1) * wedge_eval(phi_form(conn, r + 1), theta_n, vectors);
    }

    double second = 0.0;
    if (r >= 1) {
        // i_1<…<i_{r−1} (head), i_r free, i_{r+1}<…<i_{n−1} (rest).
        for (const auto& s : splits(n - 1, r - 1)) {
            for (std::size_t pos = 0; pos < s.tail.size(); ++pos) {
                const int free = s.tail[pos];
                std::vector<int> rest;
                for (std::size_t q = 0; q < s.tail.size(); ++q)
                    if (q != pos) rest.push_back(s.tail[q]);
                std::vector<int> order = s.head;
                order.push_back(free);
                order.insert(order.end(), rest.begin(), rest.end());

                std::vector<AlternatingForm> factors;
                for (int i : s.head) factors.push_back(AlternatingForm::covector(conn.omega.row(i)));
                factors.push_back(curvature_form(frame, curv, free));
                for (int i : rest) factors.push_back(AlternatingForm::covector(conn.theta.row(i)));
                second += perm_sign(order) * wedge(factors)(vectors);
            }
        }
        second *= signs::curvature(r);
    }
    return first + second;
}

double correction_A(const PrincipalFrame& frame, const FrameCurvature& curv, int r) {
    const int n = frame.dim();
    check_r(n, r);
    if (r < 1) return 0.0;
    double sum = 0.0;
    for (const auto& s : splits(n - 1, r - 1)) {
        double prod = 1.0;
        for (int i : s.head) prod *= frame.kappa[i];
        for (int free : s.tail) sum += prod * curv.K(free, n - 1);
    }
    return signs::main_a(n, r) * sum;
}

double correction_B(const PrincipalFrame& frame, const FrameCurvature& curv, int r) {
    const int n = frame.dim();
    check_r(n, r);
    if (r < 2) return 0.0;
    double sum = 0.0;
    for (const auto& s : splits(n - 1, r - 2)) {
        double prod = 1.0;
        for (int i : s.head) prod *= frame.kappa[i];
        for (int a : s.tail)
            for (int b : s.tail) {
                if (a == b) continue;
                sum += prod * frame.grad_norm_tangential[a] * curv.R(b, a, b, n - 1);
            }
    }
    return signs::main_b(n, r) * sum / frame.grad_norm;
}

double main_rhs_integrand(const PrincipalFrame& frame, const FrameCurvature& curv, int r) {
    return (r + 1) * sigma_r(frame.kappa, r + 1) + correction_A(frame, curv, r) +
           correction_B(frame, curv, r);
}

FormField phi_field(const ScalarField& field, const MetricChart& chart, int r) {
    const int n = chart.dim();
    check_r(n, r);
    return FormField{n, n - 1, chart.domain(), [&field, &chart, r, n](const Vec& x) {
                         const PrincipalFrame f = principal_frame(field, chart, x);
                         return sample_coefficients(phi_form(normal_connection(f), r), n);
                     }};
}

FormField normal_coframe_field(const ScalarField& field, const MetricChart& chart) {
    const int n = chart.dim();
    return FormField{n, 1, chart.domain(), [&field, &chart, n](const Vec& x) {
                         const Mat g = chart.metric(x);
                         const Vec du = field.gradient(x);
                         const double norm = std::sqrt(du.dot(g.llt().solve(du)));
                         std::vector<double> c(n);
                         for (int a = 0; a < n; ++a) c[a] = du[a] / norm;
                         return c;
                     }};
}

} // namespace totcurv
