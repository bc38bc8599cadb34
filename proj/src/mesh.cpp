#include "ff/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace ff::mesh {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void parse_fail(int line, const std::string& what)
{
    throw Error("format", "line " + std::to_string(line) + ": " + what);
}

// Newell normal, unnormalized.
Vec3 newell(const Manifold& m, const std::vector<int>& f)
{
    Vec3 n = Vec3::Zero();
    for (size_t i = 0; i < f.size(); ++i) {
        const Vec3& a = m.vertices[f[i]];
        const Vec3& b = m.vertices[f[(i + 1) % f.size()]];
        n += a.cross(b);
    }
    return n;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    auto side = [](const Vec2& p, const Vec2& q, const Vec2& r) { return cross2(q - p, r - p); };
    double d1 = side(c, d, a), d2 = side(c, d, b), d3 = side(a, b, c), d4 = side(a, b, d);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

} // namespace

Format format_from_string(const std::string& s)
{
    std::string l = lower(s);
    if (l == "off") return Format::OFF;
    if (l == "obj") return Format::OBJ;
    throw Error("config", "unknown mesh format '" + s + "'");
}

Format format_from_path(const std::string& path)
{
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) throw Error("config", "cannot infer format of '" + path + "'");
    return format_from_string(path.substr(dot + 1));
}

void Manifold::build_adjacency()
{
    edges.clear();
    edge_faces.clear();
    edge_index.clear();
    boundary_edges.clear();
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
        const auto& f = faces[fi];
        for (size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            auto key = std::minmax(a, b);
            auto it = edge_index.find(key);
            int id;
            if (it == edge_index.end()) {
                id = static_cast<int>(edges.size());
                edge_index.emplace(key, id);
                edges.push_back(key);
                edge_faces.emplace_back();
            } else {
                id = it->second;
            }
            edge_faces[id].push_back(fi);
            if (edge_faces[id].size() > 2)
                throw Error("topology", "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                            ") has more than two faces");
        }
    }
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (edge_faces[e].size() == 1) boundary_edges.push_back(e);
}

int Manifold::edge_id(int a, int b) const
{
    auto it = edge_index.find(std::minmax(a, b));
    return it == edge_index.end() ? -1 : it->second;
}

double Manifold::bbox_diagonal() const
{
    if (vertices.empty()) return 0;
    Vec3 lo = vertices[0], hi = vertices[0];
    for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

double Manifold::surface_area() const
{
    double a = 0;
    for (const auto& f : faces) a += 0.5 * newell(*this, f).norm();
    return a;
}

Manifold parse_mesh(std::istream& in, Format fmt)
{
    Manifold m;
    std::string line;
    int lineno = 0;
    auto next_content = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++lineno;
            auto hash = out.find('#');
            if (hash != std::string::npos) out.erase(hash);
            if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (fmt == Format::OFF) {
        if (!next_content(line)) parse_fail(lineno, "empty file");
        std::istringstream hs(line);
        std::string magic;
        hs >> magic;
        if (magic != "OFF") parse_fail(lineno, "missing OFF header");
        long nv = -1, nf = -1, ne = 0;
        if (!(hs >> nv)) {
            if (!next_content(line)) parse_fail(lineno, "missing counts");
            hs = std::istringstream(line);
            hs >> nv;
        }
        if (!(hs >> nf >> ne) || nv < 0 || nf < 0) parse_fail(lineno, "bad counts");
        for (long i = 0; i < nv; ++i) {
            if (!next_content(line)) parse_fail(lineno, "unexpected end of vertices");
            std::istringstream ls(line);
            Vec3 v;
            if (!(ls >> v.x() >> v.y() >> v.z())) parse_fail(lineno, "bad vertex");
            m.vertices.push_back(v);
        }
        for (long i = 0; i < nf; ++i) {
            if (!next_content(line)) parse_fail(lineno, "unexpected end of faces");
            std::istringstream ls(line);
            int k;
            if (!(ls >> k) || k < 3) parse_fail(lineno, "bad face size");
            std::vector<int> f(k);
            for (int j = 0; j < k; ++j) {
                if (!(ls >> f[j])) parse_fail(lineno, "bad face index");
                if (f[j] < 0 || f[j] >= nv) parse_fail(lineno, "face index out of range");
            }
            m.faces.push_back(std::move(f));
        }
    } else {
        while (next_content(line)) {
            std::istringstream ls(line);
            std::string tag;
            ls >> tag;
            if (tag == "v") {
                Vec3 v;
                if (!(ls >> v.x() >> v.y() >> v.z())) parse_fail(lineno, "bad vertex");
                m.vertices.push_back(v);
            } else if (tag == "f") {
                std::vector<int> f;
                std::string tok;
                while (ls >> tok) {
                    int idx = 0;
                    try {
                        idx = std::stoi(tok.substr(0, tok.find('/')));
                    } catch (const std::exception&) {
                        parse_fail(lineno, "bad face index '" + tok + "'");
                    }
                    int n = static_cast<int>(m.vertices.size());
                    idx = idx < 0 ? n + idx : idx - 1;
                    if (idx < 0 || idx >= n) parse_fail(lineno, "face index out of range");
                    f.push_back(idx);
                }
                if (f.size() < 3) parse_fail(lineno, "face with fewer than 3 vertices");
                m.faces.push_back(std::move(f));
            }
            // other records (vn, vt, g, o, s, usemtl) carry nothing we use
        }
    }
    m.build_adjacency();
    return m;
}

Manifold load_mesh(const std::string& path, Format f)
{
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open '" + path + "'");
    return parse_mesh(in, f);
}

void write_mesh(std::ostream& out, const Manifold& m, Format f)
{
    out << std::setprecision(17);
    if (f == Format::OFF) {
        out << "OFF\n" << m.vertices.size() << ' ' << m.faces.size() << " 0\n";
        for (const auto& v : m.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const auto& fc : m.faces) {
            out << fc.size();
            for (int i : fc) out << ' ' << i;
            out << '\n';
        }
    } else {
        for (const auto& v : m.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const auto& fc : m.faces) {
            out << 'f';
            for (int i : fc) out << ' ' << i + 1;
            out << '\n';
        }
    }
}

void save_mesh(const std::string& path, const Manifold& m, Format f)
{
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write '" + path + "'");
    write_mesh(out, m, f);
}

ValidationReport validate_manifold(const Manifold& m, const Tolerances& tol)
{
    ValidationReport r;
    auto add = [&](std::string kind, int face, int edge, std::string detail) {
        r.violations.push_back({std::move(kind), face, edge, std::move(detail)});
    };
    if (m.vertices.empty() || m.faces.empty()) add("empty", -1, -1, "no vertices or faces");
    for (size_t i = 0; i < m.vertices.size(); ++i)
        if (!m.vertices[i].allFinite()) add("nonfinite", -1, -1, "vertex " + std::to_string(i));

    // adjacency may be stale or absent on hand-built meshes
    std::map<std::pair<int, int>, std::vector<int>> ef;
    for (int fi = 0; fi < static_cast<int>(m.faces.size()); ++fi) {
        const auto& f = m.faces[fi];
        for (size_t i = 0; i < f.size(); ++i) ef[std::minmax(f[i], f[(i + 1) % f.size()])].push_back(fi);
    }
    for (const auto& [e, fs] : ef)
        if (fs.size() > 2)
            add("nonmanifold", -1, -1,
                "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") has " +
                    std::to_string(fs.size()) + " faces");

    const double diag = m.bbox_diagonal();
    const double eps = tol.planar_rel * diag;
    std::vector<Vec3> normals(m.faces.size(), Vec3::Zero());
    for (int fi = 0; fi < static_cast<int>(m.faces.size()); ++fi) {
        const auto& f = m.faces[fi];
        Vec3 n = newell(m, f);
        double area2 = n.norm();
        if (area2 <= eps * diag) {
            add("degenerate", fi, -1, "zero area");
            continue;
        }
        n /= area2;
        normals[fi] = n;
        Vec3 c = Vec3::Zero();
        for (int v : f) c += m.vertices[v];
        c /= static_cast<double>(f.size());
        double worst = 0;
        for (int v : f) worst = std::max(worst, std::abs((m.vertices[v] - c).dot(n)));
        if (worst > eps) {
            std::ostringstream os;
            os << "vertex off plane by " << worst;
            add("nonplanar", fi, -1, os.str());
        }
        // simplicity in the face plane
        Vec3 ax = (m.vertices[f[1]] - m.vertices[f[0]]).normalized();
        Vec3 ay = n.cross(ax);
        std::vector<Vec2> p;
        for (int v : f) {
            Vec3 d = m.vertices[v] - m.vertices[f[0]];
            p.emplace_back(d.dot(ax), d.dot(ay));
        }
        const size_t k = p.size();
        bool simple = true;
        for (size_t i = 0; i < k && simple; ++i)
            for (size_t j = i + 2; j < k && simple; ++j) {
                if (i == 0 && j == k - 1) continue;
                if (segments_cross(p[i], p[(i + 1) % k], p[j], p[(j + 1) % k])) simple = false;
            }
        for (size_t i = 0; i < k && simple; ++i)
            for (size_t j = i + 1; j < k; ++j)
                if (f[i] == f[j]) simple = false;
        if (!simple) add("nonsimple", fi, -1, "self-intersecting boundary");
    }

    // touching faces: interior angle across an edge is zero
    for (const auto& [e, fs] : ef) {
        if (fs.size() != 2 || normals[fs[0]].isZero() || normals[fs[1]].isZero()) continue;
        const Vec3& a = m.vertices[e.first];
        const Vec3& b = m.vertices[e.second];
        Vec3 d = (b - a).normalized();
        auto inward = [&](int fi) {
            Vec3 w = normals[fi].cross(d);
            // orient toward the face centroid
            Vec3 c = Vec3::Zero();
            for (int v : m.faces[fi]) c += m.vertices[v];
            c /= static_cast<double>(m.faces[fi].size());
            return (c - a).dot(w) < 0 ? Vec3(-w) : w;
        };
        double ang = angle_between(inward(fs[0]), inward(fs[1]));
        if (ang < 1e-9) {
            int id = m.edge_id(e.first, e.second);
            add("touching", fs[0], id, "faces " + std::to_string(fs[0]) + " and " + std::to_string(fs[1]) + " fold onto each other");
        }
    }
    return r;
}

Mat3 random_rotation(std::uint64_t seed, int attempt)
{
    // Shoemake's uniform quaternion from three uniforms
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(attempt));
    auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double u1 = uni(), u2 = uni(), u3 = uni();
    double a = std::sqrt(1 - u1), b = std::sqrt(u1);
    Eigen::Quaterniond q(b * std::cos(2 * kPi * u3), a * std::sin(2 * kPi * u2), a * std::cos(2 * kPi * u2),
                         b * std::sin(2 * kPi * u3));
    return q.normalized().toRotationMatrix();
}

double min_height_gap(const std::vector<Vec3>& pts)
{
    std::vector<double> z;
    for (const auto& p : pts) z.push_back(p.z());
    std::sort(z.begin(), z.end());
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < z.size(); ++i) g = std::min(g, z[i] - z[i - 1]);
    return g;
}

OrientedManifold orient_generic(const Manifold& m, std::uint64_t seed, int max_retries, const Tolerances& tol)
{
    const double eps = tol.height_rel * m.bbox_diagonal();
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Mat3 R = attempt == 0 ? Mat3::Identity() : random_rotation(seed, attempt);
        Manifold r = m;
        for (auto& v : r.vertices) v = R * v;
        if (min_height_gap(r.vertices) < eps) continue;
        OrientedManifold om;
        om.base = m;
        om.rotated = std::move(r);
        om.rotation = R;
        om.attempts = attempt + 1;
        for (const auto& v : om.rotated.vertices) om.vertex_heights.push_back(v.z());
        std::sort(om.vertex_heights.begin(), om.vertex_heights.end());
        return om;
    }
    throw Error("orient", "no generic rotation after " + std::to_string(max_retries) + " attempts");
}

} // namespace ff::mesh
