#pragma once

// Two-colored diagrams with a rotation system: vertices carry a cyclic slot
// order, edges join vertex slots or boundary legs, and vertex-free closed
// loops are kept as a counter until rewriting cashes them in.  Faces are
// traced combinatorially; open diagrams get a frame cycle through their
// boundary legs so the picture closes up.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "scalar.hpp"

namespace spidercalc {

enum class Color { black, white };
enum class Role { lower, upper };

inline char role_char(Role r) { return r == Role::lower ? 'L' : 'U'; }

// rational times a half power of the symbolic dimension N
struct Prefactor {
    BigRat coeff = 1;
    int half_exp = 0;

    Prefactor operator*(const Prefactor& o) const { return {coeff * o.coeff, half_exp + o.half_exp}; }
    bool operator==(const Prefactor& o) const = default;

    ExactScalar bind(int n) const { return ExactScalar::half_power(n, half_exp, coeff); }

    std::string to_string() const {
        return rat_to_string(coeff) + " * sqrtN^" + std::to_string(half_exp);
    }
};

// edge endpoint: a vertex slot (diagram-unique id) or a boundary leg
struct End {
    int slot = -1;
    bool boundary_upper = false;
    int index = 0;  // boundary legs are 1-based

    static End at_slot(int s) { return End{s, false, 0}; }
    static End at_boundary(bool upper, int idx) { return End{-1, upper, idx}; }
    bool is_boundary() const { return slot < 0; }
    bool operator==(const End& o) const = default;
};

struct Edge {
    End a, b;
};

struct SlotInfo {
    int vertex = -1;
    Role role = Role::lower;
};

struct DiagVertex {
    Color color = Color::black;
    std::vector<int> rotation;  // ccw cyclic order of slot ids
};

struct Face {
    std::vector<std::pair<int, bool>> steps;  // (edge index, traversed a->b)
};

class Diagram {
  public:
    int n_lower = 0;
    int n_upper = 0;
    std::map<int, DiagVertex> vertices;
    std::map<int, SlotInfo> slots;
    std::vector<Edge> edges;
    int bare_loops = 0;
    Prefactor prefactor;
    bool planar = true;

    int fresh_vertex() { return next_vertex_++; }
    int fresh_slot() { return next_slot_++; }

    int add_vertex(Color c, const std::vector<Role>& roles) {
        int v = fresh_vertex();
        DiagVertex dv;
        dv.color = c;
        for (Role r : roles) {
            int s = fresh_slot();
            slots[s] = SlotInfo{v, r};
            dv.rotation.push_back(s);
        }
        vertices[v] = std::move(dv);
        return v;
    }

    void remove_vertex(int v) {
        for (int s : vertices.at(v).rotation) slots.erase(s);
        vertices.erase(v);
    }

    int degree(int v) const {
        return static_cast<int>(vertices.at(v).rotation.size()) ;
    }

    int slot_position(int s) const {
        const auto& rot = vertices.at(slots.at(s).vertex).rotation;
        auto it = std::find(rot.begin(), rot.end(), s);
        if (it == rot.end()) throw std::logic_error("slot missing from rotation");
        return static_cast<int>(it - rot.begin());
    }

    // ---- generators ----

    static Diagram identity(int n) {
        Diagram d;
        d.n_lower = d.n_upper = n;
        for (int i = 1; i <= n; ++i)
            d.edges.push_back({End::at_boundary(false, i), End::at_boundary(true, i)});
        return d;
    }

    static Diagram spider(Color c, int k, int l) {
        if (k < 0 || l < 0) throw std::invalid_argument("negative arity");
        Diagram d;
        d.n_lower = k;
        d.n_upper = l;
        // ccw rotation: lower legs left to right, then upper legs right to left
        std::vector<Role> roles;
        for (int i = 0; i < k; ++i) roles.push_back(Role::lower);
        for (int j = 0; j < l; ++j) roles.push_back(Role::upper);
        int v = d.add_vertex(c, roles);
        const auto& rot = d.vertices.at(v).rotation;
        for (int i = 1; i <= k; ++i)
            d.edges.push_back({End::at_boundary(false, i), End::at_slot(rot[i - 1])});
        for (int j = 1; j <= l; ++j)
            d.edges.push_back({End::at_boundary(true, j), End::at_slot(rot[k + l - j])});
        return d;
    }

    static Diagram black_spider(int k, int l) { return spider(Color::black, k, l); }
    static Diagram white_spider(int k, int l) { return spider(Color::white, k, l); }

    static Diagram cup() {
        Diagram d;
        d.n_upper = 2;
        d.edges.push_back({End::at_boundary(true, 1), End::at_boundary(true, 2)});
        return d;
    }

    static Diagram cap() {
        Diagram d;
        d.n_lower = 2;
        d.edges.push_back({End::at_boundary(false, 1), End::at_boundary(false, 2)});
        return d;
    }

    static Diagram crossing() {
        Diagram d;
        d.n_lower = d.n_upper = 2;
        d.planar = false;
        d.edges.push_back({End::at_boundary(false, 1), End::at_boundary(true, 2)});
        d.edges.push_back({End::at_boundary(false, 2), End::at_boundary(true, 1)});
        return d;
    }

    static Diagram scalar(Prefactor p) {
        Diagram d;
        d.prefactor = p;
        return d;
    }

  private:
    int next_vertex_ = 0;
    int next_slot_ = 0;

    friend Diagram compose(const Diagram&, const Diagram&);
    friend Diagram tensor_product(const Diagram&, const Diagram&);
    friend Diagram dagger(const Diagram&);
};

// copy src vertices/slots/edges into dst with fresh ids; boundary ends pass
// through the remap callback
inline void absorb_diagram(Diagram& dst, const Diagram& src,
                           const std::function<End(const End&)>& boundary_remap,
                           std::vector<Edge>& out_edges) {
    std::map<int, int> vmap, smap;
    for (const auto& [v, dv] : src.vertices) {
        std::vector<Role> roles;
        for (int s : dv.rotation) roles.push_back(src.slots.at(s).role);
        int nv = dst.add_vertex(dv.color, roles);
        vmap[v] = nv;
        const auto& nrot = dst.vertices.at(nv).rotation;
        for (std::size_t i = 0; i < dv.rotation.size(); ++i) smap[dv.rotation[i]] = nrot[i];
    }
    for (const auto& e : src.edges) {
        auto remap = [&](const End& x) {
            if (x.is_boundary()) return boundary_remap(x);
            return End::at_slot(smap.at(x.slot));
        };
        out_edges.push_back({remap(e.a), remap(e.b)});
    }
    dst.bare_loops += src.bare_loops;
}

// f after g: glue g's upper boundary to f's lower boundary
inline Diagram compose(const Diagram& f, const Diagram& g) {
    if (g.n_upper != f.n_lower) throw std::invalid_argument("composition arity mismatch");
    int m = g.n_upper;
    Diagram d;
    d.n_lower = g.n_lower;
    d.n_upper = f.n_upper;
    d.prefactor = f.prefactor * g.prefactor;
    d.planar = f.planar && g.planar;

    // interface ports encoded as boundary ends with index m+1..: port i of the
    // seam appears exactly once from each side
    const int port_base = 1000000;
    std::vector<Edge> pending;
    absorb_diagram(d, g, [&](const End& x) {
        if (x.boundary_upper) return End::at_boundary(false, port_base + x.index);
        return x;
    }, pending);
    absorb_diagram(d, f, [&](const End& x) {
        if (!x.boundary_upper) return End::at_boundary(false, port_base + x.index);
        return x;
    }, pending);

    auto is_port = [&](const End& x) {
        return x.is_boundary() && !x.boundary_upper && x.index > port_base;
    };
    auto end_ref = [&](int e, int which) -> End& {
        return which == 0 ? pending[e].a : pending[e].b;
    };

    // eliminate each seam port in turn; ports are degree-two pseudo-nodes,
    // so fusing the two incident edge ends either merges two edges or, when
    // both ends belong to one edge, closes a bare strand into a loop
    std::vector<char> dead(pending.size(), 0);
    std::map<int, std::vector<std::pair<int, int>>> at_port;  // port -> (edge, end 0/1)
    for (std::size_t e = 0; e < pending.size(); ++e)
        for (int which : {0, 1})
            if (is_port(end_ref(static_cast<int>(e), which)))
                at_port[end_ref(static_cast<int>(e), which).index].push_back(
                    {static_cast<int>(e), which});
    if (static_cast<int>(at_port.size()) != m) throw std::logic_error("seam port missing");
    for (auto& [port, ends] : at_port) {
        if (ends.size() != 2) throw std::logic_error("seam port not matched twice");
        auto [e1, w1] = ends[0];
        auto [e2, w2] = ends[1];
        if (e1 == e2) {
            d.bare_loops += 1;
            dead[e1] = 1;
            continue;
        }
        End far = end_ref(e2, 1 - w2);
        end_ref(e1, w1) = far;
        dead[e2] = 1;
        if (is_port(far) && far.index != port) {
            for (auto& pe : at_port.at(far.index))
                if (pe.first == e2) pe = {e1, w1};
        }
    }
    for (std::size_t e = 0; e < pending.size(); ++e)
        if (!dead[e]) d.edges.push_back(pending[e]);
    return d;
}

// g to the right of f
inline Diagram tensor_product(const Diagram& f, const Diagram& g) {
    Diagram d;
    d.n_lower = f.n_lower + g.n_lower;
    d.n_upper = f.n_upper + g.n_upper;
    d.prefactor = f.prefactor * g.prefactor;
    d.planar = f.planar && g.planar;
    std::vector<Edge> all;
    absorb_diagram(d, f, [](const End& x) { return x; }, all);
    absorb_diagram(d, g, [&](const End& x) {
        return End::at_boundary(x.boundary_upper,
                                x.index + (x.boundary_upper ? f.n_upper : f.n_lower));
    }, all);
    d.edges = std::move(all);
    return d;
}

// reflection across the horizontal axis: boundaries swap, rotations reverse,
// slot roles flip, rational prefactor is its own conjugate
inline Diagram dagger(const Diagram& f) {
    Diagram d;
    d.n_lower = f.n_upper;
    d.n_upper = f.n_lower;
    d.prefactor = f.prefactor;
    d.planar = f.planar;
    d.bare_loops = f.bare_loops;
    std::map<int, int> smap;
    for (const auto& [v, dv] : f.vertices) {
        std::vector<Role> roles;
        std::vector<int> rev(dv.rotation.rbegin(), dv.rotation.rend());
        for (int s : rev)
            roles.push_back(f.slots.at(s).role == Role::lower ? Role::upper : Role::lower);
        int nv = d.add_vertex(dv.color, roles);
        const auto& nrot = d.vertices.at(nv).rotation;
        for (std::size_t i = 0; i < rev.size(); ++i) smap[rev[i]] = nrot[i];
    }
    for (const auto& e : f.edges) {
        auto remap = [&](const End& x) {
            if (x.is_boundary()) return End::at_boundary(!x.boundary_upper, x.index);
            return End::at_slot(smap.at(x.slot));
        };
        d.edges.push_back({remap(e.a), remap(e.b)});
    }
    return d;
}

// ---- validation ----

namespace detail {

// framed combinatorial map: darts with reversal and ccw successor
struct FaceSystem {
    int n_real_edges = 0;
    int n_arcs = 0;                       // frame cycle length (k+l)
    std::vector<int> dart_from;           // node of origin (vertex id or -1-pos)
    std::vector<int> face_of;             // dart -> face index
    std::vector<std::vector<int>> faces;  // face -> dart cycle
    int outer_face = -1;                  // -1 when the diagram is closed

    int rev(int dart) const { return dart ^ 1; }
    int forward_arc_dart(int arc) const { return 2 * n_real_edges + 2 * arc; }
    int backward_arc_dart(int arc) const { return 2 * n_real_edges + 2 * arc + 1; }
    int real_dart(int edge, bool from_a) const { return 2 * edge + (from_a ? 0 : 1); }
};

inline FaceSystem trace_faces(const Diagram& d) {
    if (!d.planar) throw std::invalid_argument("face traversal needs a planar diagram");
    FaceSystem fs;
    int e = static_cast<int>(d.edges.size());
    int m = d.n_lower + d.n_upper;
    fs.n_real_edges = e;
    fs.n_arcs = m;
    int ndarts = 2 * e + 2 * m;
    fs.dart_from.assign(ndarts, 0);

    // boundary leg -> frame cycle position: lower 1..k, then upper l..1
    auto cycle_pos = [&](bool upper, int index) {
        return upper ? d.n_lower + (d.n_upper - index) : index - 1;
    };
    auto frame_node = [&](int pos) { return -1 - pos; };

    // locate the unique edge end at each slot / boundary leg
    std::map<int, int> dart_at_slot;           // slot id -> dart pointing away
    std::vector<int> dart_at_leg(m, -1);       // cycle pos -> strand dart away
    for (int i = 0; i < e; ++i) {
        auto place = [&](const End& x, bool from_a) {
            int dart = fs.real_dart(i, from_a);
            if (x.is_boundary()) {
                int pos = cycle_pos(x.boundary_upper, x.index);
                if (pos < 0 || pos >= m || dart_at_leg[pos] != -1)
                    throw std::invalid_argument("boundary leg misuse");
                dart_at_leg[pos] = dart;
                fs.dart_from[dart] = frame_node(pos);
            } else {
                if (dart_at_slot.count(x.slot)) throw std::invalid_argument("slot used twice");
                dart_at_slot[x.slot] = dart;
                fs.dart_from[dart] = d.slots.at(x.slot).vertex;
            }
        };
        place(d.edges[i].a, true);
        place(d.edges[i].b, false);
    }
    for (int p = 0; p < m; ++p)
        if (dart_at_leg[p] < 0) throw std::invalid_argument("unused boundary leg");
    for (const auto& [s, info] : d.slots) {
        (void)info;
        if (!dart_at_slot.count(s)) throw std::invalid_argument("unused vertex slot");
    }

    // ccw dart order per node
    std::map<int, std::vector<int>> order;
    for (const auto& [v, dv] : d.vertices) {
        auto& lst = order[v];
        for (int s : dv.rotation) lst.push_back(dart_at_slot.at(s));
    }
    for (int p = 0; p < m; ++p) {
        auto& lst = order[frame_node(p)];
        lst.push_back(dart_at_leg[p]);
        int prev_arc = (p + m - 1) % m;
        lst.push_back(fs.backward_arc_dart(prev_arc));
        lst.push_back(fs.forward_arc_dart(p));
        fs.dart_from[fs.forward_arc_dart(p)] = frame_node(p);
        fs.dart_from[fs.backward_arc_dart(p)] = frame_node((p + 1) % m);
    }

    std::vector<int> pos_in_order(ndarts, -1);
    for (auto& [node, lst] : order) {
        (void)node;
        for (std::size_t i = 0; i < lst.size(); ++i) pos_in_order[lst[i]] = static_cast<int>(i);
    }

    auto phi = [&](int dart) {
        int r = fs.rev(dart);
        const auto& lst = order.at(fs.dart_from[r]);
        int i = pos_in_order[r];
        return lst[(i + 1) % lst.size()];
    };

    fs.face_of.assign(ndarts, -1);
    for (int start = 0; start < ndarts; ++start) {
        if (fs.face_of[start] != -1) continue;
        int id = static_cast<int>(fs.faces.size());
        fs.faces.emplace_back();
        int cur = start;
        do {
            fs.face_of[cur] = id;
            fs.faces[id].push_back(cur);
            cur = phi(cur);
        } while (cur != start);
    }
    if (m > 0) fs.outer_face = fs.face_of[fs.forward_arc_dart(0)];
    return fs;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline void validate(const Diagram& d) {
    if (d.n_lower < 0 || d.n_upper < 0 || d.bare_loops < 0)
        throw std::invalid_argument("negative counts");
    std::set<int> seen_slots;
    std::set<std::pair<bool, int>> seen_legs;
    for (const auto& e : d.edges) {
        for (const End& x : {e.a, e.b}) {
            if (x.is_boundary()) {
                int bound = x.boundary_upper ? d.n_upper : d.n_lower;
                if (x.index < 1 || x.index > bound)
                    throw std::invalid_argument("boundary index out of range");
                if (!seen_legs.insert({x.boundary_upper, x.index}).second)
                    throw std::invalid_argument("boundary leg used twice");
            } else {
                if (!d.slots.count(x.slot)) throw std::invalid_argument("unknown slot");
                if (!seen_slots.insert(x.slot).second)
                    throw std::invalid_argument("slot used twice");
            }
        }
    }
    if (static_cast<int>(seen_legs.size()) != d.n_lower + d.n_upper)
        throw std::invalid_argument("unused boundary leg");
    std::size_t total_slots = 0;
    for (const auto& [v, dv] : d.vertices) {
        total_slots += dv.rotation.size();
        for (int s : dv.rotation) {
            auto it = d.slots.find(s);
            if (it == d.slots.end() || it->second.vertex != v)
                throw std::invalid_argument("rotation references foreign slot");
            if (!seen_slots.count(s)) throw std::invalid_argument("unused vertex slot");
        }
    }
    if (total_slots != d.slots.size() || seen_slots.size() != d.slots.size())
        throw std::invalid_argument("slot bookkeeping mismatch");

    if (d.planar) {
        // genus check: V - E + F = 2 on every connected component of the
        // framed map (the frame joins all boundary legs into one component)
        auto fs = detail::trace_faces(d);
        int m = d.n_lower + d.n_upper;
        std::map<int, int> comp;  // node -> component root via union-find over ints
        std::vector<int> nodes;
        for (const auto& [v, dv] : d.vertices) {
            (void)dv;
            nodes.push_back(v);
        }
        for (int p = 0; p < m; ++p) nodes.push_back(-1 - p);
        std::map<int, int> idx;
        for (std::size_t i = 0; i < nodes.size(); ++i) idx[nodes[i]] = static_cast<int>(i);
        detail::UnionFind uf(static_cast<int>(nodes.size()));
        int ndarts = static_cast<int>(fs.dart_from.size());
        for (int dart = 0; dart < ndarts; dart += 2)
            uf.unite(idx.at(fs.dart_from[dart]), idx.at(fs.dart_from[dart + 1]));
        std::map<int, std::array<long, 3>> tally;  // root -> V, E, F
        for (std::size_t i = 0; i < nodes.size(); ++i) tally[uf.find(static_cast<int>(i))][0]++;
        for (int dart = 0; dart < ndarts; dart += 2)
            tally[uf.find(idx.at(fs.dart_from[dart]))][1]++;
        std::vector<char> counted(fs.faces.size(), 0);
        for (int dart = 0; dart < ndarts; ++dart) {
            int face = fs.face_of[dart];
            if (counted[face]) continue;
            counted[face] = 1;
            tally[uf.find(idx.at(fs.dart_from[dart]))][2]++;
        }
        for (const auto& [root, vef] : tally) {
            (void)root;
            long f = vef[1] == 0 ? 1 : vef[2];  // an isolated vertex sits in one face
            if (vef[0] - vef[1] + f != 2)
                throw std::invalid_argument("rotation system is not genus zero");
        }
    }
}

// faces of the drawn picture; the artificial region outside the frame is
// dropped, and each bare loop contributes its two featureless faces
inline std::vector<Face> faces(const Diagram& d) {
    auto fs = detail::trace_faces(d);
    std::vector<Face> out;
    for (std::size_t i = 0; i < fs.faces.size(); ++i) {
        if (static_cast<int>(i) == fs.outer_face) continue;
        Face f;
        for (int dart : fs.faces[i])
            if (dart < 2 * fs.n_real_edges) f.steps.push_back({dart / 2, dart % 2 == 0});
        out.push_back(std::move(f));
    }
    for (int i = 0; i < d.bare_loops; ++i) {
        out.push_back(Face{});
        out.push_back(Face{});
    }
    return out;
}

// 2-color the faces so that neighbours across a strand alternate and the
// leftmost region stays uncoloured; lower gap i joins upper gap j when a
// vertex of the requested color touches both regions
inline std::pair<SetPartition, SetPartition> region_coloring_pair(const Diagram& d) {
    if (!d.planar) throw std::invalid_argument("region coloring needs a planar diagram");
    if (d.n_lower % 2 || d.n_upper % 2) throw std::invalid_argument("odd boundary");
    for (const auto& [v, dv] : d.vertices) {
        (void)v;
        if (dv.rotation.size() % 2) throw std::invalid_argument("odd vertex degree");
    }
    if (d.bare_loops > 0) throw std::invalid_argument("unreduced bare loops");
    int k = d.n_lower / 2, l = d.n_upper / 2;
    if (k + l == 0) return {SetPartition{0, 0, {}}, SetPartition{0, 0, {}}};

    auto fs = detail::trace_faces(d);
    int nf = static_cast<int>(fs.faces.size());
    int m = d.n_lower + d.n_upper;

    // alternate colors across real edges, starting uncoloured at the leftmost
    // face (right of the frame's closing arc run backwards)
    std::vector<int> color(nf, -1);
    int leftmost = fs.face_of[fs.backward_arc_dart(m - 1)];
    color[leftmost] = 0;
    std::vector<int> queue{leftmost};
    while (!queue.empty()) {
        int f = queue.back();
        queue.pop_back();
        for (int dart : fs.faces[f]) {
            if (dart >= 2 * fs.n_real_edges) continue;
            int g = fs.face_of[fs.rev(dart)];
            int want = 1 - color[f];
            if (color[g] == -1) {
                color[g] = want;
                queue.push_back(g);
            } else if (color[g] != want) {
                throw std::invalid_argument("faces are not two-colorable");
            }
        }
    }

    // boundary gap -> face: lower gap i sits right of the arc run L_2i -> L_2i-1,
    // upper gap j right of the run U_2j-1 -> U_2j
    std::vector<int> point_face(k + l, -1);
    for (int i = 1; i <= k; ++i) point_face[i - 1] = fs.face_of[fs.backward_arc_dart(2 * i - 2)];
    for (int j = 1; j <= l; ++j)
        point_face[k + j - 1] = fs.face_of[fs.backward_arc_dart(d.n_lower + d.n_upper - 2 * j)];
    for (int p = 0; p < k + l; ++p)
        if (color[point_face[p]] != 1)
            throw std::invalid_argument("boundary gap is not in a coloured region");

    std::vector<std::set<int>> face_vertices(nf);
    for (std::size_t dart = 0; dart < fs.dart_from.size(); ++dart) {
        int node = fs.dart_from[dart];
        if (node >= 0) face_vertices[fs.face_of[dart]].insert(node);
    }

    auto build = [&](Color c) {
        detail::UnionFind uf(nf);
        for (const auto& [v, dv] : d.vertices) {
            if (dv.color != c) continue;
            int first = -1;
            for (int f = 0; f < nf; ++f) {
                if (color[f] != 1 || !face_vertices[f].count(v)) continue;
                if (first == -1)
                    first = f;
                else
                    uf.unite(first, f);
            }
            if (first == -1) throw std::invalid_argument("vertex touches no coloured region");
        }
        std::map<int, std::vector<int>> blocks;
        for (int p = 0; p < k + l; ++p) blocks[uf.find(point_face[p])].push_back(p + 1);
        SetPartition sp{k, l, {}};
        for (auto& [root, pts] : blocks) {
            (void)root;
            sp.blocks.push_back(pts);
        }
        sp.canonicalize();
        return sp;
    };
    return {build(Color::black), build(Color::white)};
}

// deterministic traversal key; relabels vertices by first visit from the
// boundary and measures slots relative to the entry slot
inline std::string canonical_key(const Diagram& d, bool with_roles = false) {
    std::ostringstream os;
    os << d.n_lower << "," << d.n_upper << ";" << d.bare_loops << ";";
    std::map<int, std::pair<int, int>> visit;  // vertex -> (new id, base position)
    std::vector<int> order;

    std::map<int, int> edge_at_slot;
    std::map<std::pair<bool, int>, int> edge_at_leg;
    for (std::size_t i = 0; i < d.edges.size(); ++i)
        for (const End& x : {d.edges[i].a, d.edges[i].b}) {
            if (x.is_boundary())
                edge_at_leg[{x.boundary_upper, x.index}] = static_cast<int>(i);
            else
                edge_at_slot[x.slot] = static_cast<int>(i);
        }

    auto describe = [&](const End& x) -> std::string {
        if (x.is_boundary())
            return (x.boundary_upper ? "U" : "L") + std::to_string(x.index);
        int v = d.slots.at(x.slot).vertex;
        auto it = visit.find(v);
        if (it == visit.end()) {
            int id = static_cast<int>(visit.size());
            visit[v] = {id, d.slot_position(x.slot)};
            order.push_back(v);
            const auto& dv = d.vertices.at(v);
            std::string desc = "v" + std::to_string(id) + "!" +
                               (dv.color == Color::black ? "b" : "w") +
                               std::to_string(dv.rotation.size());
            return desc;
        }
        int deg = d.degree(v);
        int off = (d.slot_position(x.slot) - it->second.second + deg) % deg;
        return "v" + std::to_string(it->second.first) + "@" + std::to_string(off);
    };
    auto other_end = [&](int edge, const End& self) {
        return d.edges[edge].a == self ? d.edges[edge].b : d.edges[edge].a;
    };

    for (int pass = 0; pass < 2; ++pass) {
        bool upper = pass == 1;
        int bound = upper ? d.n_upper : d.n_lower;
        for (int i = 1; i <= bound; ++i) {
            End self = End::at_boundary(upper, i);
            os << describe(self) << ">" << describe(other_end(edge_at_leg.at({upper, i}), self))
               << ";";
        }
    }
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        int v = order[qi];
        const auto& dv = d.vertices.at(v);
        int deg = static_cast<int>(dv.rotation.size());
        int base = visit.at(v).second;
        os << "[v" << visit.at(v).first;
        if (with_roles) {
            for (int o = 0; o < deg; ++o)
                os << role_char(d.slots.at(dv.rotation[(base + o) % deg]).role);
        }
        os << ":";
        for (int o = 0; o < deg; ++o) {
            int s = dv.rotation[(base + o) % deg];
            End self = End::at_slot(s);
            os << describe(other_end(edge_at_slot.at(s), self)) << ",";
        }
        os << "]";
    }
    if (visit.size() != d.vertices.size()) {
        // vertices unreachable from the boundary: record their profile
        std::vector<std::string> rest;
        for (const auto& [v, dv] : d.vertices)
            if (!visit.count(v))
                rest.push_back((dv.color == Color::black ? "b" : "w") +
                               std::to_string(dv.rotation.size()));
        std::sort(rest.begin(), rest.end());
        os << "|rest:";
        for (const auto& r : rest) os << r << ",";
    }
    return os.str();
}

// ---- serialization ----

inline std::string diagram_to_text(const Diagram& d) {
    std::ostringstream os;
    os << "diagram\n";
    os << "lower " << d.n_lower << "\n";
    os << "upper " << d.n_upper << "\n";
    os << "planar " << (d.planar ? "true" : "false") << "\n";
    os << "loops " << d.bare_loops << "\n";
    os << "prefactor " << d.prefactor.to_string() << "\n";
    std::map<int, int> slot_pos;
    for (const auto& [v, dv] : d.vertices) {
        os << "vertex " << v << " " << (dv.color == Color::black ? "black" : "white") << " ";
        for (std::size_t i = 0; i < dv.rotation.size(); ++i) {
            os << role_char(d.slots.at(dv.rotation[i]).role);
            slot_pos[dv.rotation[i]] = static_cast<int>(i);
        }
        if (dv.rotation.empty()) os << "-";
        os << "\n";
    }
    auto end_text = [&](const End& x) -> std::string {
        if (x.is_boundary())
            return (x.boundary_upper ? std::string("upper:") : std::string("lower:")) +
                   std::to_string(x.index);
        return "v" + std::to_string(d.slots.at(x.slot).vertex) + ":" +
               std::to_string(slot_pos.at(x.slot));
    };
    for (const auto& e : d.edges) os << "edge " << end_text(e.a) << " " << end_text(e.b) << "\n";
    os << "end\n";
    return os.str();
}

inline Diagram diagram_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    if (!(is >> word) || word != "diagram") throw std::invalid_argument("missing diagram header");
    Diagram d;
    std::map<int, int> vid_map;                    // file id -> internal id
    std::map<std::pair<int, int>, int> slot_map;   // (file id, position) -> slot id
    bool saw_end = false;
    while (is >> word) {
        if (word == "end") {
            saw_end = true;
            break;
        }
        if (word == "lower") {
            is >> d.n_lower;
        } else if (word == "upper") {
            is >> d.n_upper;
        } else if (word == "planar") {
            std::string b;
            is >> b;
            d.planar = b == "true";
        } else if (word == "loops") {
            is >> d.bare_loops;
        } else if (word == "prefactor") {
            std::string frac, star, pw;
            is >> frac >> star >> pw;
            if (star != "*" || pw.rfind("sqrtN^", 0) != 0)
                throw std::invalid_argument("bad prefactor");
            d.prefactor.coeff = rat_from_string(frac);
            d.prefactor.half_exp = std::stoi(pw.substr(6));
        } else if (word == "vertex") {
            int fid;
            std::string col, roles;
            if (!(is >> fid >> col >> roles)) throw std::invalid_argument("bad vertex line");
            Color c = col == "black" ? Color::black : Color::white;
            if (col != "black" && col != "white") throw std::invalid_argument("bad color");
            std::vector<Role> rs;
            if (roles != "-")
                for (char ch : roles) {
                    if (ch == 'L')
                        rs.push_back(Role::lower);
                    else if (ch == 'U')
                        rs.push_back(Role::upper);
                    else
                        throw std::invalid_argument("bad role letter");
                }
            if (vid_map.count(fid)) throw std::invalid_argument("duplicate vertex id");
            int v = d.add_vertex(c, rs);
            vid_map[fid] = v;
            const auto& rot = d.vertices.at(v).rotation;
            for (std::size_t i = 0; i < rot.size(); ++i)
                slot_map[{fid, static_cast<int>(i)}] = rot[i];
        } else if (word == "edge") {
            auto parse_end = [&](const std::string& t) {
                auto colon = t.find(':');
                if (colon == std::string::npos) throw std::invalid_argument("bad endpoint");
                std::string head = t.substr(0, colon);
                int num = std::stoi(t.substr(colon + 1));
                if (head == "lower") return End::at_boundary(false, num);
                if (head == "upper") return End::at_boundary(true, num);
                if (head.size() > 1 && head[0] == 'v') {
                    int fid = std::stoi(head.substr(1));
                    auto it = slot_map.find({fid, num});
                    if (it == slot_map.end()) throw std::invalid_argument("unknown slot");
                    return End::at_slot(it->second);
                }
                throw std::invalid_argument("bad endpoint");
            };
            std::string ta, tb;
            if (!(is >> ta >> tb)) throw std::invalid_argument("bad edge line");
            d.edges.push_back({parse_end(ta), parse_end(tb)});
        } else {
            throw std::invalid_argument("unknown diagram field: " + word);
        }
    }
    if (!saw_end) throw std::invalid_argument("missing end marker");
    validate(d);
    return d;
}

}  // namespace spidercalc
