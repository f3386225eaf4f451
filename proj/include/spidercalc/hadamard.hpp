#pragma once

// Sign matrices with orthogonal rows: Walsh and Paley constructions,
// equivalence moves by signed permutations, automorphism search, and the
// 4N-vertex graph encoding plus its permutation action.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spidercalc {

using IntMatrix = std::vector<std::vector<int>>;

inline IntMatrix int_matrix(int rows, int cols, int fill = 0) {
    return IntMatrix(rows, std::vector<int>(cols, fill));
}

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    int n = static_cast<int>(a.size());
    int k = static_cast<int>(b.size());
    if (n == 0 || k == 0 || static_cast<int>(a[0].size()) != k)
        throw std::invalid_argument("matrix shape mismatch");
    int m = static_cast<int>(b[0].size());
    IntMatrix c = int_matrix(n, m);
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < k; ++x) {
            if (a[i][x] == 0) continue;
            for (int j = 0; j < m; ++j) c[i][j] += a[i][x] * b[x][j];
        }
    return c;
}

inline IntMatrix mat_transpose(const IntMatrix& a) {
    if (a.empty()) return {};
    IntMatrix t = int_matrix(static_cast<int>(a[0].size()), static_cast<int>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline IntMatrix mat_identity(int n) {
    IntMatrix m = int_matrix(n, n);
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

class HadamardMatrix {
  public:
    explicit HadamardMatrix(IntMatrix entries) : e_(std::move(entries)) {
        n_ = static_cast<int>(e_.size());
        if (n_ == 0) throw std::invalid_argument("empty matrix");
        for (const auto& row : e_) {
            if (static_cast<int>(row.size()) != n_) throw std::invalid_argument("matrix not square");
            for (int v : row)
                if (v != 1 && v != -1) throw std::invalid_argument("entries must be +1 or -1");
        }
    }

    int size() const { return n_; }
    int at(int i, int j) const { return e_[i][j]; }
    const IntMatrix& entries() const { return e_; }

    bool operator==(const HadamardMatrix& o) const { return e_ == o.e_; }

  private:
    int n_ = 0;
    IntMatrix e_;
};

// rows pairwise orthogonal: H H^T = N I
inline bool is_hadamard(const HadamardMatrix& h) {
    int n = h.size();
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            int dot = 0;
            for (int j = 0; j < n; ++j) dot += h.at(a, j) * h.at(b, j);
            if (dot != (a == b ? n : 0)) return false;
        }
    return true;
}

inline HadamardMatrix tensor_product(const HadamardMatrix& a, const HadamardMatrix& b) {
    int na = a.size(), nb = b.size();
    IntMatrix e = int_matrix(na * nb, na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < na; ++k)
                for (int l = 0; l < nb; ++l) e[i * nb + j][k * nb + l] = a.at(i, k) * b.at(j, l);
    return HadamardMatrix(std::move(e));
}

inline HadamardMatrix walsh(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("walsh order out of range");
    HadamardMatrix w1(IntMatrix{{1, 1}, {1, -1}});
    HadamardMatrix w = w1;
    for (int i = 1; i < n; ++i) w = tensor_product(w1, w);
    return w;
}

inline bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

// Border of +1 on the first row, -1 down the first column, core I + Q with
// Q the quadratic residue sign pattern; diagonal ends up all +1.
inline HadamardMatrix paley_type1(int q) {
    if (!is_prime(q) || q % 4 != 3) throw std::invalid_argument("q must be a prime = 3 mod 4");
    std::vector<int> chi(q, -1);
    chi[0] = 0;
    for (int x = 1; x < q; ++x) chi[(x * x) % q] = 1;
    int n = q + 1;
    IntMatrix e = int_matrix(n, n);
    e[0][0] = 1;
    for (int j = 1; j < n; ++j) {
        e[0][j] = 1;
        e[j][0] = -1;
    }
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            e[i][j] = (i == j) ? 1 : chi[((i - j) % q + q) % q];
    return HadamardMatrix(std::move(e));
}

// Column j of the matrix form holds signs[j] in row perm[j].
struct SignedPermutation {
    std::vector<int> perm;
    std::vector<int> signs;

    static SignedPermutation identity(int n) {
        SignedPermutation s;
        s.perm.resize(n);
        s.signs.assign(n, 1);
        for (int i = 0; i < n; ++i) s.perm[i] = i;
        return s;
    }

    int size() const { return static_cast<int>(perm.size()); }

    IntMatrix as_matrix() const {
        IntMatrix m = int_matrix(size(), size());
        for (int j = 0; j < size(); ++j) m[perm[j]][j] = signs[j];
        return m;
    }

    SignedPermutation compose(const SignedPermutation& o) const {
        if (size() != o.size()) throw std::invalid_argument("size mismatch");
        SignedPermutation r;
        r.perm.resize(size());
        r.signs.resize(size());
        for (int j = 0; j < size(); ++j) {
            r.perm[j] = perm[o.perm[j]];
            r.signs[j] = o.signs[j] * signs[o.perm[j]];
        }
        return r;
    }

    SignedPermutation inverse() const {
        SignedPermutation r;
        r.perm.resize(size());
        r.signs.resize(size());
        for (int j = 0; j < size(); ++j) {
            r.perm[perm[j]] = j;
            r.signs[perm[j]] = signs[j];
        }
        return r;
    }

    bool operator==(const SignedPermutation& o) const = default;
    bool operator<(const SignedPermutation& o) const {
        return std::tie(perm, signs) < std::tie(o.perm, o.signs);
    }
};

// m == scale * signed permutation matrix?
inline std::optional<SignedPermutation> as_signed_permutation(const IntMatrix& m, int scale = 1) {
    int n = static_cast<int>(m.size());
    SignedPermutation s;
    s.perm.assign(n, -1);
    s.signs.assign(n, 0);
    std::vector<char> row_used(n, 0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int v = m[i][j];
            if (v == 0) continue;
            if ((v != scale && v != -scale) || s.signs[j] != 0 || row_used[i]) return std::nullopt;
            s.perm[j] = i;
            s.signs[j] = v > 0 ? 1 : -1;
            row_used[i] = 1;
        }
        if (s.signs[j] == 0) return std::nullopt;
    }
    return s;
}

inline std::vector<SignedPermutation> all_signed_permutations(int n) {
    if (n > 6) throw std::invalid_argument("enumeration bounded to n <= 6");
    std::vector<SignedPermutation> out;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        for (int mask = 0; mask < (1 << n); ++mask) {
            SignedPermutation s;
            s.perm = perm;
            s.signs.resize(n);
            for (int i = 0; i < n; ++i) s.signs[i] = (mask >> i) & 1 ? -1 : 1;
            out.push_back(std::move(s));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// H' = P H Q^{-1}
inline HadamardMatrix equivalent_transform(const HadamardMatrix& h, const SignedPermutation& p,
                                           const SignedPermutation& q) {
    if (p.size() != h.size() || q.size() != h.size()) throw std::invalid_argument("size mismatch");
    IntMatrix m = mat_mul(mat_mul(p.as_matrix(), h.entries()), q.inverse().as_matrix());
    return HadamardMatrix(std::move(m));
}

// P = H Q H^{-1}, defined when the product is again a signed permutation
inline std::optional<SignedPermutation> companion(const HadamardMatrix& h,
                                                  const SignedPermutation& q) {
    IntMatrix m = mat_mul(mat_mul(h.entries(), q.as_matrix()), mat_transpose(h.entries()));
    return as_signed_permutation(m, h.size());
}

inline bool is_automorphism(const HadamardMatrix& h, const SignedPermutation& q) {
    return companion(h, q).has_value();
}

// All Q with H Q H^{-1} again a signed permutation, by choosing Q's columns
// left to right.  Partial sums M_ab track H Q H^T; each must stay within
// reach of {-N, 0, N} given the number of columns still free.
inline std::vector<SignedPermutation> automorphism_group(const HadamardMatrix& h) {
    int n = h.size();
    if (n > 8) throw std::invalid_argument("automorphism search bounded to N <= 8");
    std::vector<SignedPermutation> found;
    std::vector<int> perm(n, -1), signs(n, 0);
    std::vector<char> used(n, 0);
    IntMatrix m = int_matrix(n, n);

    auto feasible = [&](int rem) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                int v = m[a][b];
                int best = std::min(std::abs(v), std::min(std::abs(v - n), std::abs(v + n)));
                if (best > rem) return false;
            }
        return true;
    };

    std::function<void(int)> rec = [&](int t) {
        if (t == n) {
            if (as_signed_permutation(m, n)) {
                SignedPermutation s;
                s.perm = perm;
                s.signs = signs;
                found.push_back(std::move(s));
            }
            return;
        }
        for (int r = 0; r < n; ++r) {
            if (used[r]) continue;
            for (int sgn : {1, -1}) {
                for (int a = 0; a < n; ++a) {
                    int ha = sgn * h.at(a, r);
                    for (int b = 0; b < n; ++b) m[a][b] += ha * h.at(b, t);
                }
                if (feasible(n - t - 1)) {
                    perm[t] = r;
                    signs[t] = sgn;
                    used[r] = 1;
                    rec(t + 1);
                    used[r] = 0;
                }
                for (int a = 0; a < n; ++a) {
                    int ha = sgn * h.at(a, r);
                    for (int b = 0; b < n; ++b) m[a][b] -= ha * h.at(b, t);
                }
            }
        }
    };
    rec(0);
    std::sort(found.begin(), found.end());
    return found;
}

// closure, identity, inverses; quadratic in the group order
inline bool is_group(const std::vector<SignedPermutation>& g) {
    if (g.empty()) return false;
    std::vector<SignedPermutation> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    auto member = [&](const SignedPermutation& s) {
        return std::binary_search(sorted.begin(), sorted.end(), s);
    };
    if (!member(SignedPermutation::identity(g[0].size()))) return false;
    for (const auto& a : g) {
        if (!member(a.inverse())) return false;
        for (const auto& b : g)
            if (!member(a.compose(b))) return false;
    }
    return true;
}

// vertex blocks r+, r-, c+, c- of N each
struct HadamardGraphData {
    int n = 0;
    bool looped = false;
    IntMatrix adjacency;
    std::vector<std::string> labels;
};

inline HadamardGraphData hadamard_graph(const HadamardMatrix& h, bool looped) {
    int n = h.size();
    HadamardGraphData g;
    g.n = n;
    g.looped = looped;
    g.adjacency = int_matrix(4 * n, 4 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int plus = h.at(i, j) == 1 ? 1 : 0;
            int minus = 1 - plus;
            g.adjacency[i][2 * n + j] = plus;
            g.adjacency[i][3 * n + j] = minus;
            g.adjacency[n + i][2 * n + j] = minus;
            g.adjacency[n + i][3 * n + j] = plus;
            g.adjacency[2 * n + j][i] = plus;
            g.adjacency[3 * n + j][i] = minus;
            g.adjacency[2 * n + j][n + i] = minus;
            g.adjacency[3 * n + j][n + i] = plus;
        }
    if (looped)
        for (int i = 0; i < 2 * n; ++i) g.adjacency[i][i] = 1;
    g.labels.reserve(4 * n);
    for (const char* side : {"r", "c"})
        for (const char* sgn : {"+", "-"})
            for (int i = 1; i <= n; ++i)
                g.labels.push_back(std::string(side) + std::to_string(i) + sgn);
    return g;
}

// u = [[p+,p-,0,0],[p-,p+,0,0],[0,0,q+,q-],[0,0,q-,q+]] with p = H Q H^{-1},
// x+- picking out the +1 / -1 entries of x
inline IntMatrix magic_from_automorphism(const HadamardMatrix& h, const SignedPermutation& q) {
    auto p = companion(h, q);
    if (!p) throw std::invalid_argument("not an automorphism");
    int n = h.size();
    IntMatrix u = int_matrix(4 * n, 4 * n);
    auto fill = [&](const SignedPermutation& s, int base) {
        for (int j = 0; j < n; ++j) {
            int off = s.signs[j] == 1 ? 0 : n;
            u[base + s.perm[j] + off][base + j] = 1;
            u[base + s.perm[j] + (n - off)][base + n + j] = 1;
        }
    };
    fill(*p, 0);
    fill(q, 2 * n);
    return u;
}

inline bool is_permutation_matrix(const IntMatrix& m) {
    auto s = as_signed_permutation(m, 1);
    if (!s) return false;
    return std::all_of(s->signs.begin(), s->signs.end(), [](int v) { return v == 1; });
}

inline std::string matrix_to_text(const HadamardMatrix& h) {
    std::ostringstream os;
    os << h.size() << "\n";
    for (int i = 0; i < h.size(); ++i) {
        for (int j = 0; j < h.size(); ++j) os << (h.at(i, j) == 1 ? '+' : '-');
        os << "\n";
    }
    return os.str();
}

inline HadamardMatrix matrix_from_text(const std::string& text) {
    std::istringstream is(text);
    int n = 0;
    if (!(is >> n) || n <= 0) throw std::invalid_argument("bad matrix header");
    std::string line;
    std::getline(is, line);
    IntMatrix e;
    while (static_cast<int>(e.size()) < n && std::getline(is, line)) {
        std::vector<int> row;
        for (char c : line) {
            if (c == '+')
                row.push_back(1);
            else if (c == '-')
                row.push_back(-1);
            else if (c != ' ' && c != '\t' && c != '\r')
                throw std::invalid_argument("bad matrix character");
        }
        if (row.empty()) continue;
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("bad matrix row length");
        e.push_back(std::move(row));
    }
    if (static_cast<int>(e.size()) != n) throw std::invalid_argument("missing matrix rows");
    return HadamardMatrix(std::move(e));
}

inline std::string graph_to_dot(const HadamardGraphData& g) {
    std::ostringstream os;
    os << "graph hadamard {\n";
    int v = 4 * g.n;
    for (int i = 0; i < v; ++i) os << "  \"" << g.labels[i] << "\";\n";
    for (int i = 0; i < v; ++i)
        for (int j = i; j < v; ++j)
            if (g.adjacency[i][j])
                os << "  \"" << g.labels[i] << "\" -- \"" << g.labels[j] << "\";\n";
    os << "}\n";
    return os.str();
}

inline std::string graph_to_adjacency_text(const HadamardGraphData& g) {
    std::ostringstream os;
    int v = 4 * g.n;
    os << "vertices " << v << (g.looped ? " looped" : "") << "\n";
    for (int i = 0; i < v; ++i) {
        os << g.labels[i] << ":";
        for (int j = 0; j < v; ++j)
            if (g.adjacency[i][j]) os << " " << g.labels[j];
        os << "\n";
    }
    return os.str();
}

// sorted multiset of |sum_j H_aj H_bj H_cj| over row triples, an equivalence invariant
inline std::vector<int> row_triple_profile(const HadamardMatrix& h) {
    int n = h.size();
    std::vector<int> prof;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                int s = 0;
                for (int j = 0; j < n; ++j) s += h.at(a, j) * h.at(b, j) * h.at(c, j);
                prof.push_back(std::abs(s));
            }
    std::sort(prof.begin(), prof.end());
    return prof;
}

// decides equivalence by scanning all Q, practical for N <= 4 only
inline bool equivalent_exhaustive(const HadamardMatrix& h1, const HadamardMatrix& h2) {
    if (h1.size() != h2.size()) return false;
    if (h1.size() > 4) throw std::invalid_argument("exhaustive equivalence bounded to N <= 4");
    // H2 = P H1 Q^{-1} for some P iff H2 Q H1^{-1} is a signed permutation
    for (const auto& q : all_signed_permutations(h1.size())) {
        IntMatrix m = mat_mul(mat_mul(h2.entries(), q.as_matrix()), mat_transpose(h1.entries()));
        if (as_signed_permutation(m, h1.size())) return true;
    }
    return false;
}

// the three defining identities, checked entrywise over the integers
struct HadamardAxioms {
    bool transpose_consistent = false;  // H^T equals the adjoint (entries are real signs)
    bool schur_unit = false;            // H * H entrywise is the all-ones matrix
    bool unitary_scaled = false;        // H H^T == N I == H^T H
    bool ok() const { return transpose_consistent && schur_unit && unitary_scaled; }
};

inline HadamardAxioms check_hadamard_axioms(const HadamardMatrix& h) {
    HadamardAxioms out;
    int n = h.size();
    const IntMatrix& e = h.entries();
    out.transpose_consistent = true;
    out.schur_unit = true;
    for (int i = 0; i < n && out.transpose_consistent; ++i)
        for (int j = 0; j < n; ++j) {
            int v = e[i][j];
            if (v != 1 && v != -1) { out.transpose_consistent = false; break; }
            if (v * v != 1) out.schur_unit = false;
        }
    IntMatrix left = mat_mul(e, mat_transpose(e));
    IntMatrix right = mat_mul(mat_transpose(e), e);
    out.unitary_scaled = true;
    for (int i = 0; i < n && out.unitary_scaled; ++i)
        for (int j = 0; j < n; ++j) {
            int want = (i == j) ? n : 0;
            if (left[i][j] != want || right[i][j] != want) { out.unitary_scaled = false; break; }
        }
    return out;
}

// fixed collection per size used across tests and reports
inline std::vector<HadamardMatrix> stock_matrices(int n) {
    auto twist = [](const HadamardMatrix& h) {
        int k = h.size();
        SignedPermutation p = SignedPermutation::identity(k);
        p.perm[0] = 1;
        p.perm[1] = 0;
        p.signs[1] = -1;
        SignedPermutation q = SignedPermutation::identity(k);
        q.perm[k - 2] = k - 1;
        q.perm[k - 1] = k - 2;
        q.signs[k - 1] = -1;
        return equivalent_transform(h, p, q);
    };
    std::vector<HadamardMatrix> out;
    if (n == 4) {
        out.push_back(walsh(2));
        out.push_back(paley_type1(3));
        IntMatrix m(4, std::vector<int>(4, -1));
        for (int i = 0; i < 4; ++i) m[i][i] = 1;
        out.push_back(HadamardMatrix(m));
        out.push_back(twist(walsh(2)));
    } else if (n == 8) {
        out.push_back(walsh(3));
        out.push_back(paley_type1(7));
        out.push_back(twist(walsh(3)));
    } else if (n == 12) {
        out.push_back(paley_type1(11));
    } else {
        throw std::invalid_argument("no stock matrices for this size");
    }
    return out;
}

}  // namespace spidercalc
