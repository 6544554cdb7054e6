#include "exprclone/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace exprclone {

namespace {

// area2 threshold matching kDegenerateTriangleArea (area = |area2| / 2)
constexpr double kArea2Eps = 2.0 * kDegenerateTriangleArea;

using Edge = std::pair<int, int>;

Edge edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Working triangulation with edge adjacency for Lawson flips.
struct FlipMesh {
    const std::vector<Vec2>& pos;
    std::vector<std::array<int, 3>> tris; // positively oriented
    std::vector<char> alive;
    std::map<Edge, std::vector<int>> edge_tris;

    explicit FlipMesh(const std::vector<Vec2>& positions) : pos(positions) {}

    int add(std::array<int, 3> t) {
        const int idx = static_cast<int>(tris.size());
        tris.push_back(t);
        alive.push_back(1);
        for (int e = 0; e < 3; ++e) {
            edge_tris[edge_key(t[e], t[(e + 1) % 3])].push_back(idx);
        }
        return idx;
    }

    void remove(int idx) {
        alive[static_cast<size_t>(idx)] = 0;
        const auto& t = tris[static_cast<size_t>(idx)];
        for (int e = 0; e < 3; ++e) {
            auto& vec = edge_tris[edge_key(t[e], t[(e + 1) % 3])];
            vec.erase(std::remove(vec.begin(), vec.end(), idx), vec.end());
        }
    }

    // Orders the shared edge so triangle t1 holds directed edge a->b; returns
    // the opposite vertices (c in t1, d in t2).
    bool shared_edge_config(Edge e, int& t1, int& t2, int& a, int& b, int& c, int& d) const {
        const auto it = edge_tris.find(e);
        if (it == edge_tris.end() || it->second.size() != 2) return false;
        t1 = it->second[0];
        t2 = it->second[1];
        a = e.first;
        b = e.second;
        if (!has_directed(t1, a, b)) std::swap(t1, t2);
        c = third_vertex(t1, a, b);
        d = third_vertex(t2, a, b);
        return true;
    }

    bool has_directed(int tri, int a, int b) const {
        const auto& t = tris[static_cast<size_t>(tri)];
        for (int e = 0; e < 3; ++e) {
            if (t[e] == a && t[(e + 1) % 3] == b) return true;
        }
        return false;
    }

    int third_vertex(int tri, int a, int b) const {
        for (int v : tris[static_cast<size_t>(tri)]) {
            if (v != a && v != b) return v;
        }
        return -1;
    }

    bool flip_valid(int a, int b, int c, int d) const {
        (void)a;
        (void)b;
        return triangle_area2(pos[a], pos[d], pos[c]) > kArea2Eps &&
               triangle_area2(pos[d], pos[b], pos[c]) > kArea2Eps;
    }

    // Replaces triangles on edge (a, b) with the (c, d) diagonal.
    void flip(int t1, int t2, int a, int b, int c, int d) {
        remove(t1);
        remove(t2);
        add({a, d, c});
        add({d, b, c});
    }

    std::vector<Edge> interior_edges() const {
        std::vector<Edge> edges;
        for (const auto& [e, ts] : edge_tris) {
            if (ts.size() == 2) edges.push_back(e);
        }
        return edges;
    }
};

void lawson_flips(FlipMesh& mesh, size_t n_points) {
    std::deque<Edge> work;
    std::set<Edge> queued;
    for (const Edge& e : mesh.interior_edges()) {
        work.push_back(e);
        queued.insert(e);
    }
    const size_t max_flips = 20 * n_points * n_points + 1000;
    size_t flips = 0;
    while (!work.empty()) {
        const Edge e = work.front();
        work.pop_front();
        queued.erase(e);
        int t1, t2, a, b, c, d;
        if (!mesh.shared_edge_config(e, t1, t2, a, b, c, d)) continue;
        if (incircle_det(mesh.pos[a], mesh.pos[b], mesh.pos[c], mesh.pos[d]) <= kInCircleTol)
            continue;
        if (!mesh.flip_valid(a, b, c, d)) continue;
        mesh.flip(t1, t2, a, b, c, d);
        if (++flips > max_flips) {
            throw GeometryError("delaunay: flip loop failed to converge");
        }
        for (const Edge& q : {edge_key(a, d), edge_key(d, b), edge_key(b, c), edge_key(c, a)}) {
            if (queued.insert(q).second) work.push_back(q);
        }
    }
}

// Exactly cocircular quads carry no Delaunay preference; resolve them toward
// the diagonal with the lexicographically smaller vertex-id pair.
void cocircular_tie_pass(FlipMesh& mesh) {
    for (int guard = 0; guard < 1000; ++guard) {
        bool changed = false;
        for (const Edge& e : mesh.interior_edges()) {
            int t1, t2, a, b, c, d;
            if (!mesh.shared_edge_config(e, t1, t2, a, b, c, d)) continue;
            const double det =
                incircle_det(mesh.pos[a], mesh.pos[b], mesh.pos[c], mesh.pos[d]);
            if (std::abs(det) > kInCircleTol) continue;
            if (edge_key(c, d) < edge_key(a, b) && mesh.flip_valid(a, b, c, d)) {
                mesh.flip(t1, t2, a, b, c, d);
                changed = true;
            }
        }
        if (!changed) return;
    }
    throw GeometryError("delaunay: cocircular tie resolution failed to converge");
}

std::array<int, 3> canonical_triangle(std::array<int, 3> t) {
    // rotate the smallest id first; rotation preserves orientation
    const int k = static_cast<int>(std::min_element(t.begin(), t.end()) - t.begin());
    return {t[static_cast<size_t>(k)], t[static_cast<size_t>((k + 1) % 3)],
            t[static_cast<size_t>((k + 2) % 3)]};
}

} // namespace

double incircle_det(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
           ad * (bdx * cdy - bdy * cdx);
}

TriangleMesh delaunay_triangulate(const FeaturePointSet& set) {
    const int n = set.size();
    std::vector<Vec2> pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<size_t>(i)] = set.pos(i);

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const Vec2 a = pos[static_cast<size_t>(i)], b = pos[static_cast<size_t>(j)];
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return i < j;
    });
    for (size_t i = 1; i < order.size(); ++i) {
        const Vec2 a = pos[static_cast<size_t>(order[i - 1])];
        const Vec2 b = pos[static_cast<size_t>(order[i])];
        if (std::abs(a.x - b.x) < 1e-9 && std::abs(a.y - b.y) < 1e-9) {
            throw GeometryError("delaunay: coincident points " + std::to_string(order[i - 1]) +
                                " and " + std::to_string(order[i]));
        }
    }

    // collinear prefix of the sorted sweep
    std::vector<int> chain = {order[0], order[1]};
    size_t next = 2;
    while (next < order.size()) {
        const int p = order[next];
        if (std::abs(triangle_area2(pos[static_cast<size_t>(chain[0])],
                                    pos[static_cast<size_t>(chain[1])],
                                    pos[static_cast<size_t>(p)])) > kArea2Eps) {
            break;
        }
        chain.push_back(p);
        ++next;
    }
    if (next == order.size()) {
        throw GeometryError("delaunay: all points are collinear");
    }

    FlipMesh mesh(pos);
    const int first_off = order[next];
    ++next;
    const double side = triangle_area2(pos[static_cast<size_t>(chain[0])],
                                       pos[static_cast<size_t>(chain[1])],
                                       pos[static_cast<size_t>(first_off)]);
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        if (side > 0) {
            mesh.add({chain[i], chain[i + 1], first_off});
        } else {
            mesh.add({chain[i + 1], chain[i], first_off});
        }
    }
    std::vector<int> hull;
    if (side > 0) {
        hull = chain;
    } else {
        hull.assign(chain.rbegin(), chain.rend());
    }
    hull.push_back(first_off);

    // sweep insertion: every remaining point is outside the current hull
    for (; next < order.size(); ++next) {
        const int p = order[next];
        const Vec2 pp = pos[static_cast<size_t>(p)];
        const int h = static_cast<int>(hull.size());
        std::vector<char> visible(static_cast<size_t>(h));
        int first_vis = -1;
        for (int i = 0; i < h; ++i) {
            const Vec2 u = pos[static_cast<size_t>(hull[static_cast<size_t>(i)])];
            const Vec2 v = pos[static_cast<size_t>(hull[static_cast<size_t>((i + 1) % h)])];
            visible[static_cast<size_t>(i)] = triangle_area2(u, v, pp) < -kArea2Eps;
        }
        for (int i = 0; i < h; ++i) {
            if (visible[static_cast<size_t>(i)] && !visible[static_cast<size_t>((i + h - 1) % h)]) {
                first_vis = i;
                break;
            }
        }
        if (first_vis < 0) {
            throw GeometryError("delaunay: sweep insertion found no visible hull edge");
        }
        int len = 0;
        while (len < h && visible[static_cast<size_t>((first_vis + len) % h)]) ++len;
        for (int i = 0; i < len; ++i) {
            const int u = hull[static_cast<size_t>((first_vis + i) % h)];
            const int v = hull[static_cast<size_t>((first_vis + i + 1) % h)];
            mesh.add({u, p, v});
        }
        std::vector<int> new_hull;
        new_hull.reserve(static_cast<size_t>(h - len + 2));
        for (int j = (first_vis + len) % h;; j = (j + 1) % h) {
            new_hull.push_back(hull[static_cast<size_t>(j)]);
            if (j == first_vis) break;
        }
        new_hull.push_back(p);
        hull = std::move(new_hull);
    }

    lawson_flips(mesh, static_cast<size_t>(n));
    cocircular_tie_pass(mesh);

    TriangleMesh out;
    out.vertices = set;
    for (size_t i = 0; i < mesh.tris.size(); ++i) {
        if (mesh.alive[i]) out.triangles.push_back(canonical_triangle(mesh.tris[i]));
    }
    std::sort(out.triangles.begin(), out.triangles.end());
    return out;
}

TriangleMesh mesh_with_positions(const TriangleMesh& ref, const FeaturePointSet& positions) {
    require_same_schema(ref.vertices, positions, "mesh_with_positions");
    for (const auto& t : ref.triangles) {
        const double area2 = triangle_area2(positions.pos(t[0]), positions.pos(t[1]),
                                            positions.pos(t[2]));
        if (std::abs(area2) <= kArea2Eps) {
            std::ostringstream os;
            os << "degenerate triangle (" << t[0] << ", " << t[1] << ", " << t[2]
               << ") after repositioning (area " << std::abs(area2) / 2.0 << " px^2)";
            throw GeometryError(os.str());
        }
    }
    TriangleMesh out;
    out.vertices = positions;
    out.triangles = ref.triangles;
    return out;
}

std::vector<int> neighbors_of(const TriangleMesh& mesh, int vid) {
    if (vid < 0 || vid >= mesh.vertices.size()) {
        throw GeometryError("neighbors_of: unknown vertex id " + std::to_string(vid));
    }
    std::set<int> nbrs;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            if (t[e] == vid) {
                nbrs.insert(t[(e + 1) % 3]);
                nbrs.insert(t[(e + 2) % 3]);
            }
        }
    }
    return {nbrs.begin(), nbrs.end()};
}

} // namespace exprclone
