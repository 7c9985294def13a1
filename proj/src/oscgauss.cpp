#include "mdclab/oscgauss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "mdclab/errors.hpp"

namespace mdc::osc {

OscKernel::OscKernel(const std::vector<std::string>& labels)
    : vars(labels),
      A(Eigen::MatrixXd::Zero(labels.size(), labels.size())),
      B(Eigen::VectorXd::Zero(labels.size())) {
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw VariableMismatch("duplicate kernel variable");
}

int OscKernel::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == label) return static_cast<int>(i);
    return -1;
}

int OscKernel::ensure(const std::string& label) {
    const int found = index_of(label);
    if (found >= 0) return found;
    const int n = static_cast<int>(vars.size());
    vars.push_back(label);
    A.conservativeResize(n + 1, n + 1);
    A.row(n).setZero();
    A.col(n).setZero();
    B.conservativeResize(n + 1);
    B(n) = 0;
    return n;
}

void OscKernel::add_quadratic(const std::string& i, const std::string& j, double coef) {
    const int a = ensure(i);
    const int b = ensure(j);
    if (a == b) {
        A(a, a) += 2.0 * coef;
    } else {
        A(a, b) += coef;
        A(b, a) += coef;
    }
}

void OscKernel::add_linear(const std::string& i, double coef) { B(ensure(i)) += coef; }

double OscKernel::exponent(const std::map<std::string, double>& values) const {
    Eigen::VectorXd v(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        auto it = values.find(vars[k]);
        if (it == values.end()) throw VariableMismatch("no value for " + vars[k]);
        v(k) = it->second;
    }
    return 0.5 * v.dot(A * v) + B.dot(v) + c;
}

cplx OscKernel::evaluate(const std::map<std::string, double>& values, double hbar) const {
    if (!constraints.empty()) throw DeltaConstraintError("kernel carries delta constraints");
    if (vol_pow != 0) throw Error("kernel carries volume factors");
    const double e = exponent(values);
    return amp * std::pow(2.0 * std::numbers::pi * hbar, pihbar_pow) *
           std::exp(cplx(0.0, e / hbar));
}

namespace {

OscKernel drop(const OscKernel& K, int idx) {
    const int n = static_cast<int>(K.size());
    OscKernel out = K;
    out.vars.erase(out.vars.begin() + idx);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (i != idx) keep.push_back(i);
    out.A = K.A(keep, keep);
    out.B = K.B(keep);
    return out;
}

double matrix_scale(const OscKernel& K) {
    double s = 0;
    if (K.size() > 0) s = std::max(K.A.cwiseAbs().maxCoeff(), K.B.cwiseAbs().maxCoeff());
    return s > 0 ? s : 1.0;
}

int find_eliminated(const OscKernel& K, const std::string& v) {
    for (std::size_t i = 0; i < K.constraints.size(); ++i)
        if (K.constraints[i].eliminated == v) return static_cast<int>(i);
    return -1;
}

int find_referencing(const OscKernel& K, const std::string& v) {
    for (std::size_t i = 0; i < K.constraints.size(); ++i) {
        auto it = K.constraints[i].coeffs.find(v);
        if (it != K.constraints[i].coeffs.end() && it->second != 0.0) return static_cast<int>(i);
    }
    return -1;
}

void marginalize_step(OscKernel& K, const std::string& v, const std::multiset<std::string>& pending,
                      std::set<std::string>& consumed, double tol) {
    if (const int ci = find_eliminated(K, v); ci >= 0) {
        K.amp /= std::abs(K.constraints[ci].coeffs.at(v));
        K.constraints.erase(K.constraints.begin() + ci);
        return;
    }
    const int idx = K.index_of(v);
    if (idx < 0) throw VariableMismatch("cannot integrate unknown variable " + v);

    if (const int ci = find_referencing(K, v); ci >= 0) {
        const Constraint C = K.constraints[ci];
        K.constraints.erase(K.constraints.begin() + ci);
        const double gv = C.coeffs.at(v);
        std::map<std::string, double> h;
        for (const auto& [label, g] : C.coeffs)
            if (label != v) h[label] = -g / gv;
        K.amp /= std::abs(gv);
        K = substitute(K, v, h, -C.offset / gv);
        return;
    }

    const double scale = matrix_scale(K);
    const double pivot = K.A(idx, idx);
    if (std::abs(pivot) > 100.0 * tol * scale) {
        const int n = static_cast<int>(K.size());
        std::vector<int> keep;
        for (int i = 0; i < n; ++i)
            if (i != idx) keep.push_back(i);
        const Eigen::VectorXd a = K.A(keep, idx);
        const double bv = K.B(idx);
        OscKernel out = drop(K, idx);
        out.A -= a * a.transpose() / pivot;
        out.B -= (bv / pivot) * a;
        out.c -= bv * bv / (2.0 * pivot);
        const double phase = (pivot > 0 ? 1.0 : -1.0) * std::numbers::pi / 4.0;
        out.amp *= std::polar(1.0 / std::sqrt(std::abs(pivot)), phase);
        out.pihbar_pow += 0.5;
        K = std::move(out);
        return;
    }
    if (std::abs(pivot) > tol * scale)
        throw NearCaustic("pivot for " + v + " lies in the near-caustic band");

    const int n = static_cast<int>(K.size());
    double coupling = std::abs(K.B(idx));
    for (int k = 0; k < n; ++k)
        if (k != idx) coupling = std::max(coupling, std::abs(K.A(idx, k)));
    if (coupling <= tol * scale) {
        K = drop(K, idx);
        K.vol_pow += 1;
        return;
    }

    // delta function: sum_k A_vk u_k + B_v = 0
    Constraint C;
    for (int k = 0; k < n; ++k) {
        if (k == idx) continue;
        const double g = K.A(idx, k);
        if (std::abs(g) > tol * scale) C.coeffs[K.vars[k]] = g;
    }
    C.offset = std::abs(K.B(idx)) > tol * scale ? K.B(idx) : 0.0;
    K = drop(K, idx);
    K.pihbar_pow += 1.0;
    if (C.coeffs.empty()) throw DeltaConstraintError("delta of a nonzero constant");

    std::string e;
    double best = -1;
    bool best_pending = false;
    for (const auto& [label, g] : C.coeffs) {
        const bool is_pending = pending.count(label) > 0 && !consumed.count(label);
        if ((is_pending && !best_pending) || (is_pending == best_pending && std::abs(g) > best)) {
            e = label;
            best = std::abs(g);
            best_pending = is_pending;
        }
    }
    const double ge = C.coeffs.at(e);
    std::map<std::string, double> h;
    for (const auto& [label, g] : C.coeffs)
        if (label != e) h[label] = -g / ge;
    K = substitute(K, e, h, -C.offset / ge);
    if (best_pending) {
        K.amp /= std::abs(ge);
        consumed.insert(e);
    } else {
        C.eliminated = e;
        K.constraints.push_back(std::move(C));
    }
}

}  // namespace

OscKernel substitute(const OscKernel& K, const std::string& r,
                     const std::map<std::string, double>& h, double h0) {
    OscKernel work = K;
    for (const auto& [label, coef] : h) {
        (void)coef;
        if (label == r) throw VariableMismatch("substitution refers to itself");
        work.ensure(label);
    }
    const int ridx = work.index_of(r);
    if (ridx < 0) throw VariableMismatch("cannot substitute unknown variable " + r);
    const int n = static_cast<int>(work.size());

    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (i != ridx) keep.push_back(i);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n - 1);
    for (int col = 0; col < n - 1; ++col) T(keep[col], col) = 1.0;
    for (const auto& [label, coef] : h) {
        const int k = work.index_of(label);
        const int col = static_cast<int>(std::find(keep.begin(), keep.end(), k) - keep.begin());
        T(ridx, col) += coef;
    }
    Eigen::VectorXd t0 = Eigen::VectorXd::Zero(n);
    t0(ridx) = h0;

    OscKernel out = work;
    out.vars.erase(out.vars.begin() + ridx);
    out.A = T.transpose() * work.A * T;
    out.A = 0.5 * (out.A + out.A.transpose());
    out.B = T.transpose() * (work.B + work.A * t0);
    out.c = work.c + work.B.dot(t0) + 0.5 * t0.dot(work.A * t0);

    for (auto& C : out.constraints) {
        auto it = C.coeffs.find(r);
        if (it == C.coeffs.end()) continue;
        const double coef = it->second;
        C.coeffs.erase(it);
        for (const auto& [label, hk] : h) C.coeffs[label] += coef * hk;
        C.offset += coef * h0;
    }
    return out;
}

OscKernel marginalize(const OscKernel& K, const std::string& v, double tol) {
    OscKernel out = K;
    std::set<std::string> consumed;
    marginalize_step(out, v, {}, consumed, tol);
    return out;
}

OscKernel marginalize_all(const OscKernel& K, const std::vector<std::string>& order, double tol) {
    OscKernel out = K;
    std::multiset<std::string> pending(order.begin(), order.end());
    std::set<std::string> consumed;
    for (const auto& v : order) {
        pending.erase(pending.find(v));
        if (consumed.count(v)) continue;
        marginalize_step(out, v, pending, consumed, tol);
    }
    return out;
}

OscKernel product(const OscKernel& K1, const OscKernel& K2) {
    OscKernel out = K1;
    std::vector<int> map(K2.size());
    for (std::size_t i = 0; i < K2.size(); ++i) map[i] = out.ensure(K2.vars[i]);
    for (std::size_t i = 0; i < K2.size(); ++i) {
        out.B(map[i]) += K2.B(i);
        for (std::size_t j = 0; j < K2.size(); ++j) out.A(map[i], map[j]) += K2.A(i, j);
    }
    out.c += K2.c;
    out.amp *= K2.amp;
    out.pihbar_pow += K2.pihbar_pow;
    out.vol_pow += K2.vol_pow;
    out.constraints.insert(out.constraints.end(), K2.constraints.begin(), K2.constraints.end());
    return out;
}

OscKernel glue(const OscKernel& K1, const OscKernel& K2, const std::vector<std::string>& shared,
               double tol) {
    for (const auto& v : shared)
        if (!K1.has(v) || !K2.has(v)) throw VariableMismatch("shared variable missing: " + v);
    return marginalize_all(product(K1, K2), shared, tol);
}

OscKernel rename(const OscKernel& K, const std::map<std::string, std::string>& names) {
    auto map = [&](const std::string& s) {
        auto it = names.find(s);
        return it == names.end() ? s : it->second;
    };
    OscKernel out = K;
    for (auto& v : out.vars) v = map(v);
    std::set<std::string> seen(out.vars.begin(), out.vars.end());
    if (seen.size() != out.vars.size()) throw VariableMismatch("renaming merges variables");
    for (auto& C : out.constraints) {
        C.eliminated = map(C.eliminated);
        std::map<std::string, double> coeffs;
        for (const auto& [label, g] : C.coeffs) coeffs[map(label)] += g;
        C.coeffs = std::move(coeffs);
    }
    return out;
}

namespace {

std::vector<std::pair<std::string, double>> normalized(const Constraint& C) {
    double lead = 0;
    for (const auto& [label, g] : C.coeffs)
        if (std::abs(g) > std::abs(lead)) lead = g;
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [label, g] : C.coeffs) out.emplace_back(label, g / lead);
    out.emplace_back("", C.offset / lead);
    return out;
}

bool constraints_equal(const OscKernel& K1, const OscKernel& K2, double tol) {
    if (K1.constraints.size() != K2.constraints.size()) return false;
    std::vector<std::vector<std::pair<std::string, double>>> a, b;
    for (const auto& C : K1.constraints) a.push_back(normalized(C));
    for (const auto& C : K2.constraints) b.push_back(normalized(C));
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        bool matched = false;
        for (std::size_t j = 0; j < b.size() && !matched; ++j) {
            if (used[j] || b[j].size() != x.size()) continue;
            bool same = true;
            for (std::size_t k = 0; k < x.size() && same; ++k)
                same = x[k].first == b[j][k].first && std::abs(x[k].second - b[j][k].second) <= tol;
            if (same) used[j] = matched = true;
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace

KernelDiff compare(const OscKernel& K1, const OscKernel& K2) {
    const std::set<std::string> s1(K1.vars.begin(), K1.vars.end());
    const std::set<std::string> s2(K2.vars.begin(), K2.vars.end());
    if (s1 != s2) throw VariableMismatch("kernels have different variable sets");
    const int n = static_cast<int>(K1.size());
    std::vector<int> map(n);
    for (int i = 0; i < n; ++i) map[i] = K2.index_of(K1.vars[i]);
    KernelDiff d;
    double diff = std::abs(K1.c - K2.c);
    for (int i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(K1.B(i) - K2.B(map[i])));
        for (int j = 0; j < n; ++j)
            diff = std::max(diff, std::abs(K1.A(i, j) - K2.A(map[i], map[j])));
    }
    d.exponent_diff = diff;
    d.amp_ratio = K1.amp / K2.amp;
    d.pihbar_diff = K1.pihbar_pow - K2.pihbar_pow;
    d.vol_diff = K1.vol_pow - K2.vol_pow;
    d.constraints_match = constraints_equal(K1, K2, 1e-9);
    return d;
}

nlohmann::json to_json(const OscKernel& K) {
    std::vector<std::string> labels = K.vars;
    std::sort(labels.begin(), labels.end());
    std::vector<int> idx;
    for (const auto& l : labels) idx.push_back(K.index_of(l));
    nlohmann::json j;
    j["vars"] = labels;
    std::vector<double> A;
    for (int r : idx)
        for (int c : idx) A.push_back(K.A(r, c));
    j["A"] = A;
    std::vector<double> B;
    for (int r : idx) B.push_back(K.B(r));
    j["B"] = B;
    j["c"] = K.c;
    j["amp"] = {{"modulus", std::abs(K.amp)}, {"phase", std::arg(K.amp)}};
    j["pihbar_pow"] = K.pihbar_pow;
    j["vol_pow"] = K.vol_pow;
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& C : K.constraints)
        cons.push_back({{"eliminated", C.eliminated}, {"coeffs", C.coeffs}, {"offset", C.offset}});
    j["constraints"] = cons;
    return j;
}

OscKernel from_json(const nlohmann::json& j) {
    const auto labels = j.at("vars").get<std::vector<std::string>>();
    const auto A = j.at("A").get<std::vector<double>>();
    const auto B = j.at("B").get<std::vector<double>>();
    const std::size_t n = labels.size();
    if (A.size() != n * n || B.size() != n) throw ConfigError("kernel json has wrong sizes");
    OscKernel K(labels);
    for (std::size_t r = 0; r < n; ++r) {
        K.B(r) = B[r];
        for (std::size_t c = 0; c < n; ++c) K.A(r, c) = A[r * n + c];
    }
    K.c = j.at("c").get<double>();
    K.amp = std::polar(j.at("amp").at("modulus").get<double>(), j.at("amp").at("phase").get<double>());
    K.pihbar_pow = j.at("pihbar_pow").get<double>();
    K.vol_pow = j.at("vol_pow").get<int>();
    for (const auto& cj : j.at("constraints")) {
        Constraint C;
        C.eliminated = cj.at("eliminated").get<std::string>();
        C.coeffs = cj.at("coeffs").get<std::map<std::string, double>>();
        C.offset = cj.at("offset").get<double>();
        K.constraints.push_back(std::move(C));
    }
    return K;
}

std::string canonical_text(const OscKernel& K) { return to_json(K).dump(); }

}  // namespace mdc::osc
