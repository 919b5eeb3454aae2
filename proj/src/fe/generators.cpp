#include "romforge/fe/generators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace romforge::fe {

namespace {

constexpr Real kPi = 3.14159265358979323846;

bool near(Real a, Real b, Real tol) { return std::abs(a - b) <= tol; }

/// Keeps a lattice point when at most one index is odd (corner or edge mid);
/// HEX8 keeps corners only.
bool keep_parity(ElementKind kind, int odd_count) {
    return kind == ElementKind::HEX8 ? odd_count == 0 : odd_count <= 1;
}

} // namespace

// ===== Beam =====

Mesh generate_beam_mesh(Real length, Real width, Real thickness, int nx, int ny, int nz,
                        ElementKind kind, bool clamp_both_ends) {
    if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("beam mesh needs nx,ny,nz >= 1");
    Mesh mesh;
    mesh.kind = kind;

    const int LX = 2 * nx, LY = 2 * ny, LZ = 2 * nz;
    std::vector<Index> id(static_cast<std::size_t>((LX + 1) * (LY + 1) * (LZ + 1)), -1);
    const auto slot = [&](int i, int j, int k) -> Index& {
        return id[static_cast<std::size_t>((i * (LY + 1) + j) * (LZ + 1) + k)];
    };

    for (int i = 0; i <= LX; ++i)
        for (int j = 0; j <= LY; ++j)
            for (int k = 0; k <= LZ; ++k) {
                const int odd = (i % 2) + (j % 2) + (k % 2);
                if (!keep_parity(kind, odd)) continue;
                slot(i, j, k) = mesh.node_count();
                mesh.nodes.emplace_back(length * i / LX, -0.5 * width + width * j / LY,
                                        -0.5 * thickness + thickness * k / LZ);
            }

    // Lattice offsets per local node, matching the Mesh HEX20 ordering.
    static constexpr std::array<std::array<int, 3>, 20> kOffsets = {{
        {0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0},
        {0, 0, 2}, {2, 0, 2}, {2, 2, 2}, {0, 2, 2},
        {1, 0, 0}, {2, 1, 0}, {1, 2, 0}, {0, 1, 0},
        {1, 0, 2}, {2, 1, 2}, {1, 2, 2}, {0, 1, 2},
        {0, 0, 1}, {2, 0, 1}, {2, 2, 1}, {0, 2, 1},
    }};

    const int nn = nodes_per_element(kind);
    for (int I = 0; I < nx; ++I)
        for (int J = 0; J < ny; ++J)
            for (int K = 0; K < nz; ++K) {
                std::vector<Index> elem(static_cast<std::size_t>(nn));
                for (int a = 0; a < nn; ++a) {
                    const auto& o = kOffsets[static_cast<std::size_t>(a)];
                    elem[static_cast<std::size_t>(a)] = slot(2 * I + o[0], 2 * J + o[1], 2 * K + o[2]);
                }
                mesh.elements.push_back(std::move(elem));
            }

    const Real tol = 1e-9 * std::max({length, width, thickness});
    auto& midline = mesh.node_sets["midline"];
    auto& upper = mesh.node_sets["upper_line"];
    auto& lateral = mesh.node_sets["lateral_line"];
    auto& uplat = mesh.node_sets["upper_lateral_line"];
    for (Index n = 0; n < mesh.node_count(); ++n) {
        const Vec3& p = mesh.nodes[static_cast<std::size_t>(n)];
        const bool y0 = near(p.y(), 0.0, tol), z0 = near(p.z(), 0.0, tol);
        const bool ytop = near(p.y(), 0.5 * width, tol), ztop = near(p.z(), 0.5 * thickness, tol);
        if (y0 && z0) midline.push_back(n);
        if (y0 && ztop) upper.push_back(n);
        if (ytop && z0) lateral.push_back(n);
        if (ytop && ztop) uplat.push_back(n);
    }

    if (clamp_both_ends)
        for (Index n = 0; n < mesh.node_count(); ++n) {
            const Real x = mesh.nodes[static_cast<std::size_t>(n)].x();
            if (near(x, 0.0, tol) || near(x, length, tol))
                for (int d = 0; d < 3; ++d) mesh.dirichlet.emplace_back(n, d);
        }
    return mesh;
}

// ===== Circular plate, five-block O-grid =====

namespace {

/// Face-lattice point in one block of the butterfly at double resolution.
/// Blocks: 0 = center square (a, b), 1..4 = east/north/west/south (t, r).
struct FaceLattice {
    int ns, nr;
    Real A, R;
    std::vector<Index> center;            // (2ns+1)^2
    std::array<std::vector<Index>, 4> ring; // each (2ns+1) x (2nr+1), index t*(2nr+1)+r
    std::vector<std::array<Real, 2>> xy;  // coordinates by face id
    std::vector<bool> rim;                // outer-boundary flag by face id
    std::vector<int> oddness;             // lattice parity (0 corner-grade, 1 edge-grade)

    Index& cslot(int a, int b) { return center[static_cast<std::size_t>(a * (2 * ns + 1) + b)]; }
    Index& rslot(int blk, int t, int r) {
        return ring[static_cast<std::size_t>(blk)][static_cast<std::size_t>(t * (2 * nr + 1) + r)];
    }
};

std::array<Real, 2> square_point(const FaceLattice& fl, int a, int b) {
    return {fl.A * (static_cast<Real>(a) / fl.ns - 1.0), fl.A * (static_cast<Real>(b) / fl.ns - 1.0)};
}

/// Ring block geometry: inner edge on the square, outer edge on the circle.
/// Block angular spans start at -pi/4 (east) and advance counter-clockwise.
std::array<Real, 2> ring_point(const FaceLattice& fl, int blk, int t, int r) {
    const Real tt = static_cast<Real>(t) / (2 * fl.ns); // 0..1 along the edge
    const Real ss = static_cast<Real>(r) / (2 * fl.nr); // 0..1 radially outward
    const Real theta = -0.25 * kPi + 0.5 * kPi * (blk + tt);
    const Real cx = fl.R * std::cos(theta), cy = fl.R * std::sin(theta);
    Real px = 0, py = 0;
    const Real e = fl.A * (2.0 * tt - 1.0);
    switch (blk) {
    case 0: px = fl.A;  py = e;      break; // east edge, south to north
    case 1: px = -e;    py = fl.A;   break; // north edge, east to west
    case 2: px = -fl.A; py = -e;     break; // west edge, north to south
    case 3: px = e;     py = -fl.A;  break; // south edge, west to east
    default: throw std::logic_error("bad block");
    }
    return {(1 - ss) * px + ss * cx, (1 - ss) * py + ss * cy};
}

FaceLattice build_face_lattice(Real radius, int ns, int nr, ElementKind kind) {
    FaceLattice fl;
    fl.ns = ns;
    fl.nr = nr;
    fl.R = radius;
    fl.A = 0.5 * radius;
    fl.center.assign(static_cast<std::size_t>((2 * ns + 1) * (2 * ns + 1)), -1);
    for (auto& blk : fl.ring) blk.assign(static_cast<std::size_t>((2 * ns + 1) * (2 * nr + 1)), -1);

    const auto add = [&](std::array<Real, 2> p, bool on_rim, int odd) {
        fl.xy.push_back(p);
        fl.rim.push_back(on_rim);
        fl.oddness.push_back(odd);
        return static_cast<Index>(fl.xy.size() - 1);
    };

    for (int a = 0; a <= 2 * ns; ++a)
        for (int b = 0; b <= 2 * ns; ++b) {
            const int odd = (a % 2) + (b % 2);
            if (odd >= 2) continue; // cell centers are never serendipity nodes
            fl.cslot(a, b) = add(square_point(fl, a, b), false, odd);
        }

    for (int blk = 0; blk < 4; ++blk)
        for (int t = 0; t <= 2 * ns; ++t)
            for (int r = 0; r <= 2 * nr; ++r) {
                const int odd = (t % 2) + (r % 2);
                if (odd >= 2) continue;
                Index& s = fl.rslot(blk, t, r);
                if (r == 0) { // square edge seam
                    switch (blk) {
                    case 0: s = fl.cslot(2 * ns, t); break;
                    case 1: s = fl.cslot(2 * ns - t, 2 * ns); break;
                    case 2: s = fl.cslot(0, 2 * ns - t); break;
                    case 3: s = fl.cslot(t, 0); break;
                    }
                    continue;
                }
                if (t == 0 && blk > 0) { // shared corner ray with previous block
                    s = fl.rslot(blk - 1, 2 * ns, r);
                    continue;
                }
                if (t == 2 * ns && blk == 3) { // ray shared back to the east block
                    s = fl.rslot(0, 0, r);
                    continue;
                }
                s = add(ring_point(fl, blk, t, r), r == 2 * nr, odd);
            }
    (void)kind;
    return fl;
}

/// Face cell as 8 face ids: corners c0..c3 counter-clockwise + edge mids.
struct FaceCell {
    std::array<Index, 4> c;
    std::array<Index, 4> m; // mids of (c0,c1) (c1,c2) (c2,c3) (c3,c0)
};

} // namespace

Mesh generate_circular_plate_mesh(Real radius, Real thickness, int ns, int nr, int ntz,
                                  ElementKind kind, bool clamp_rim) {
    if (ns < 1 || nr < 1 || ntz < 1) throw std::invalid_argument("plate mesh needs ns,nr,ntz >= 1");
    FaceLattice fl = build_face_lattice(radius, ns, nr, kind);

    std::vector<FaceCell> cells;
    const auto push_cell = [&](auto point, int u, int v) {
        // Lattice-space quad with corners (u,v) (u+2,v) (u+2,v+2) (u,v+2).
        FaceCell fc{};
        fc.c = {point(u, v), point(u + 2, v), point(u + 2, v + 2), point(u, v + 2)};
        fc.m = {point(u + 1, v), point(u + 2, v + 1), point(u + 1, v + 2), point(u, v + 1)};
        const auto& p0 = fl.xy[static_cast<std::size_t>(fc.c[0])];
        const auto& p1 = fl.xy[static_cast<std::size_t>(fc.c[1])];
        const auto& p2 = fl.xy[static_cast<std::size_t>(fc.c[2])];
        const Real area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        if (area2 < 0) { // flip to counter-clockwise
            std::swap(fc.c[1], fc.c[3]);
            std::swap(fc.m[0], fc.m[3]);
            std::swap(fc.m[1], fc.m[2]);
        }
        cells.push_back(fc);
    };

    for (int I = 0; I < ns; ++I)
        for (int J = 0; J < ns; ++J)
            push_cell([&](int a, int b) { return fl.cslot(a, b); }, 2 * I, 2 * J);
    for (int blk = 0; blk < 4; ++blk)
        for (int T = 0; T < ns; ++T)
            for (int Rr = 0; Rr < nr; ++Rr)
                push_cell([&](int t, int r) { return fl.rslot(blk, t, r); }, 2 * T, 2 * Rr);

    // Extrude through the thickness: per face point, one node per valid layer.
    Mesh mesh;
    mesh.kind = kind;
    const int LZ = 2 * ntz;
    const Index nface = static_cast<Index>(fl.xy.size());
    std::vector<Index> nid(static_cast<std::size_t>(nface * (LZ + 1)), -1);
    const auto slot = [&](Index f, int l) -> Index& { return nid[static_cast<std::size_t>(f * (LZ + 1) + l)]; };

    for (Index f = 0; f < nface; ++f)
        for (int l = 0; l <= LZ; ++l) {
            const int odd = fl.oddness[static_cast<std::size_t>(f)] + (l % 2);
            if (!keep_parity(kind, odd)) continue;
            slot(f, l) = mesh.node_count();
            mesh.nodes.emplace_back(fl.xy[static_cast<std::size_t>(f)][0], fl.xy[static_cast<std::size_t>(f)][1],
                                    -0.5 * thickness + thickness * l / LZ);
        }

    const int nn = nodes_per_element(kind);
    for (const auto& fc : cells)
        for (int K = 0; K < ntz; ++K) {
            const int z0 = 2 * K, z2 = 2 * K + 2, z1 = 2 * K + 1;
            std::vector<Index> e;
            e.reserve(static_cast<std::size_t>(nn));
            for (int a = 0; a < 4; ++a) e.push_back(slot(fc.c[static_cast<std::size_t>(a)], z0));
            for (int a = 0; a < 4; ++a) e.push_back(slot(fc.c[static_cast<std::size_t>(a)], z2));
            if (kind == ElementKind::HEX20) {
                for (int a = 0; a < 4; ++a) e.push_back(slot(fc.m[static_cast<std::size_t>(a)], z0));
                for (int a = 0; a < 4; ++a) e.push_back(slot(fc.m[static_cast<std::size_t>(a)], z2));
                for (int a = 0; a < 4; ++a) e.push_back(slot(fc.c[static_cast<std::size_t>(a)], z1));
            }
            mesh.elements.push_back(std::move(e));
        }

    const Real tol = 1e-9 * std::max(radius, thickness);
    auto& mids = mesh.node_sets["midsurface"];
    for (Index n = 0; n < mesh.node_count(); ++n)
        if (near(mesh.nodes[static_cast<std::size_t>(n)].z(), 0.0, tol)) mids.push_back(n);

    if (clamp_rim)
        for (Index f = 0; f < nface; ++f) {
            if (!fl.rim[static_cast<std::size_t>(f)]) continue;
            for (int l = 0; l <= LZ; ++l) {
                const Index n = slot(f, l);
                if (n < 0) continue;
                for (int d = 0; d < 3; ++d) mesh.dirichlet.emplace_back(n, d);
            }
        }
    return mesh;
}

} // namespace romforge::fe
