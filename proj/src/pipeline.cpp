#include "ff/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace ff::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v)
{
    std::istringstream in(v);
    T x{};
    in >> x;
    if (!in || !(in >> std::ws).eof()) throw Error("config", "bad value for " + key + ": '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw Error("config", "bad value for " + key + ": '" + v + "'");
}

// Work items are independent; results land by index so the output does not depend on
// scheduling.
template <class F>
void parallel_for(int n, int threads, F&& fn)
{
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k)
        pool.emplace_back([&] {
            for (int i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

verify::Report named(const std::string& check)
{
    verify::Report r;
    r.check = check;
    return r;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

const char* role_name(char r)
{
    switch (r) {
    case 'B': return "boundary";
    case 'F': return "face";
    case 'V': return "vertex";
    case 'G': return "geodesic";
    }
    return "unknown";
}

char role_from_name(const std::string& s)
{
    if (s == "boundary") return 'B';
    if (s == "face") return 'F';
    if (s == "vertex") return 'V';
    if (s == "geodesic") return 'G';
    throw Error("input", "unknown edge role '" + s + "'");
}

json sheet_json(const fold::Sheet& s, bool with_dihedrals)
{
    json verts = json::array(), tris = json::array(), facets = json::array();
    for (const auto& x : s.x) verts.push_back(vec_json(x));
    for (const auto& t : s.tris) {
        tris.push_back(json::array({t.v[0], t.v[1], t.v[2]}));
        facets.push_back(t.facet);
    }
    json out = {{"vertices", verts}, {"triangles", tris}, {"facets", facets}, {"facet_roles", s.facet_role}};
    if (with_dihedrals) {
        json d = json::array();
        for (const auto& c : fold::crease_angles(s)) d.push_back({{"edge", {c.a, c.b}}, {"angle", c.angle}});
        out["dihedrals"] = d;
    }
    return out;
}

// All per-state checks; `near` is only used at t = 1.
struct StateCheck {
    bool pass = true;
    json doc = json::object();
    std::vector<verify::Report> reports;
    verify::FlatnessReport flat;
};

StateCheck verify_state(const fold::StackedFoldedState& st, const fold::StackedFoldedState* near, const Tolerances& tol)
{
    StateCheck out;
    verify::Report iso = named("isometry"), cross = named("noncrossing"), dih = named("dihedrals");
    for (const auto& s : st.slabs) {
        iso.merge(verify::check_isometry(s.sheet, tol.iso));
        if (st.t < 1) cross.merge(verify::check_noncrossing(s.sheet, tol));
        if (st.t > 0 && st.t < 1 && !s.residual) dih.merge(verify::check_dihedrals(s.sheet));
    }
    out.reports = {iso, verify::check_stacked_state(st, tol.iso)};
    if (st.t < 1) out.reports.push_back(cross);
    if (st.t > 0 && st.t < 1) out.reports.push_back(dih);
    if (st.t >= 1 && near) {
        out.flat = verify::check_flatness(st, *near, tol.iso);
        out.reports.push_back(out.flat.report);
        out.doc["flatness_detail"] = {{"z_spread", out.flat.z_spread},
                                      {"residual_regions", out.flat.residual_regions},
                                      {"residual_height_total", out.flat.residual_height_total},
                                      {"residual_height_bound", out.flat.residual_height_bound}};
    }
    for (const auto& r : out.reports) {
        out.doc[r.check] = verify::to_json(r, false);
        out.pass = out.pass && r.pass;
    }
    return out;
}

json diagnostics_json(const slicer::SliceDiagnostics& d)
{
    return {{"slab_count", d.slab_count},
            {"depth_used", d.depth_used},
            {"min_slab_height", d.min_slab_height},
            {"residual_nonprismoidal_count", d.residual_nonprismoidal_count},
            {"residual_height_total", d.residual_height_total},
            {"residual_height_max", d.residual_height_max},
            {"residual_heights", d.residual_heights}};
}

json config_json(const FlattenConfig& c)
{
    json j = {{"input", c.input},
              {"seed", c.seed},
              {"depth", c.depth},
              {"frames", c.frames},
              {"tol_iso", c.tol.iso},
              {"tol_solve", c.tol.solve},
              {"motion_samples", c.motion_samples}};
    if (c.format) j["format"] = *c.format == mesh::Format::OFF ? "off" : "obj";
    if (c.area_budget) j["area_budget"] = *c.area_budget;
    return j;
}

int gadget_count(const std::vector<slicer::Slab>& slabs, const std::vector<std::vector<gadget::WallLabeling>>& labels)
{
    int n = 0;
    for (size_t i = 0; i < slabs.size(); ++i)
        for (size_t w = 0; w < labels[i].size(); ++w)
            for (auto j : labels[i][w].joints) n += (j == gadget::Joint::InOut || j == gadget::Joint::OutOut) ? 1 : 0;
    return n;
}

} // namespace

void FlattenConfig::validate() const
{
    if (depth < 0) throw Error("config", "depth must be >= 0");
    if (frames < 2) throw Error("config", "frames must be >= 2");
    if (area_budget && !(*area_budget > 0)) throw Error("config", "area-budget must be positive");
    if (!(tol.iso > 0) || !(tol.solve > 0)) throw Error("config", "tolerances must be positive");
    if (threads < 0) throw Error("config", "threads must be >= 0");
}

void apply_setting(FlattenConfig& c, const std::string& key, const std::string& raw)
{
    std::string v = trim(raw);
    if (key == "input") c.input = v;
    else if (key == "format") c.format = mesh::format_from_string(v);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "depth") c.depth = parse_number<int>(key, v);
    else if (key == "frames") c.frames = parse_number<int>(key, v);
    else if (key == "area-budget") c.area_budget = parse_number<double>(key, v);
    else if (key == "out") c.out = v;
    else if (key == "serve") c.serve = v;
    else if (key == "tol-iso") c.tol.iso = parse_number<double>(key, v);
    else if (key == "tol-solve") c.tol.solve = parse_number<double>(key, v);
    else if (key == "threads") c.threads = parse_number<int>(key, v);
    else if (key == "motion-samples") c.motion_samples = parse_bool(key, v);
    else throw Error("config", "unknown key '" + key + "'");
}

FlattenConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("config", "cannot open " + path);
    FlattenConfig c;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("config", path + ":" + std::to_string(no) + ": expected key = value");
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

std::vector<double> motion_times()
{
    std::vector<double> t;
    for (int i = 0; i <= 32; ++i) t.push_back(i / 32.0);
    // 1 - 2^-k for k <= 5 is already on the uniform grid
    for (int k = 6; k <= 15; ++k) t.push_back(1 - std::ldexp(1.0, -k));
    std::sort(t.begin(), t.end());
    return t;
}

std::vector<double> frame_times(int count)
{
    if (count < 2) throw Error("config", "need at least two frames");
    std::vector<double> t;
    for (int i = 0; i < count; ++i) t.push_back(i == count - 1 ? 1.0 : double(i) / (count - 1));
    return t;
}

double total_moving_area(const std::vector<slicer::Slab>& slabs,
                         const std::vector<std::vector<gadget::WallLabeling>>& labels)
{
    double a = 0;
    for (size_t i = 0; i < slabs.size(); ++i) {
        if (slabs[i].residual) continue;
        for (size_t w = 0; w < slabs[i].walls.size(); ++w) {
            const auto& lab = labels[i][w];
            for (size_t k = 0; k < lab.joints.size(); ++k) {
                auto g = gadget::joint_gadget(slabs[i], slabs[i].walls[w], lab, static_cast<int>(k));
                if (g) a += verify::moving_crease_area(*g).area;
            }
        }
    }
    return a;
}

namespace {

std::vector<std::vector<gadget::WallLabeling>> label_all(const std::vector<slicer::Slab>& slabs)
{
    std::vector<std::vector<gadget::WallLabeling>> out;
    for (const auto& s : slabs) {
        std::vector<gadget::WallLabeling> l;
        if (!s.residual)
            for (const auto& w : s.walls) l.push_back(gadget::assign_labels(s, w));
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<slicer::Slab> clear_all(const std::vector<slicer::Slab>& in)
{
    std::vector<slicer::Slab> out;
    for (const auto& s : in) {
        if (s.residual) {
            out.push_back(s);
            continue;
        }
        for (const auto& c : slicer::split_for_gadget_clearance(s)) out.push_back(c);
    }
    return out;
}

void refresh(slicer::SliceDiagnostics& d, const std::vector<slicer::Slab>& slabs)
{
    d.slab_count = static_cast<int>(slabs.size());
    d.min_slab_height = slabs.empty() ? 0 : std::numeric_limits<double>::infinity();
    for (const auto& s : slabs) d.min_slab_height = std::min(d.min_slab_height, s.height());
}

} // namespace

Decomposition decompose(const mesh::OrientedManifold& om, int depth, std::optional<double> area_budget)
{
    Decomposition d;
    auto [refined, diag] = slicer::refine_to_prismoidal(slicer::slice_at_vertices(om), depth);
    d.diagnostics = diag;
    std::vector<slicer::Slab> disjoint;
    for (const auto& s : refined) {
        if (s.residual) {
            disjoint.push_back(s);
            continue;
        }
        for (const auto& p : slicer::split_projection_disjoint(s)) disjoint.push_back(p);
    }
    d.slabs = clear_all(disjoint);
    d.labels = label_all(d.slabs);
    d.moving_area = total_moving_area(d.slabs, d.labels);
    if (area_budget) {
        // halving every slab quarters each gadget and doubles their number
        while (d.moving_area > *area_budget) {
            if (d.budget_rounds >= 40) throw Error("slice", "area budget not reachable");
            d.slabs = clear_all(slicer::bisect_all(d.slabs));
            d.labels = label_all(d.slabs);
            d.moving_area = total_moving_area(d.slabs, d.labels);
            ++d.budget_rounds;
        }
    }
    std::stable_sort(d.slabs.begin(), d.slabs.end(),
                     [](const slicer::Slab& a, const slicer::Slab& b) { return a.z_bottom < b.z_bottom; });
    d.labels = label_all(d.slabs);
    refresh(d.diagnostics, d.slabs);
    if (d.budget_rounds > 0) {
        // bisection also splits residual slabs; recount
        d.diagnostics.residual_nonprismoidal_count = 0;
        d.diagnostics.residual_heights.clear();
        d.diagnostics.residual_height_total = d.diagnostics.residual_height_max = 0;
        for (const auto& s : d.slabs)
            if (s.residual) {
                ++d.diagnostics.residual_nonprismoidal_count;
                d.diagnostics.residual_heights.push_back(s.height());
                d.diagnostics.residual_height_total += s.height();
                d.diagnostics.residual_height_max = std::max(d.diagnostics.residual_height_max, s.height());
            }
    }
    return d;
}

fold::StackedFoldedState fold_state(const Decomposition& d, double t, const Tolerances& tol)
{
    std::vector<fold::FoldedSlab> parts;
    parts.reserve(d.slabs.size());
    for (size_t i = 0; i < d.slabs.size(); ++i) {
        auto f = fold::fold_slab(d.slabs[i], d.labels[i], t, tol);
        f.index = static_cast<int>(i);
        parts.push_back(std::move(f));
    }
    double z0 = d.slabs.empty() ? 0 : d.slabs.front().z_bottom;
    return fold::compose_global(std::move(parts), t, z0);
}

RunResult run_flatten(const FlattenConfig& c)
{
    c.validate();
    if (c.input.empty()) throw Error("config", "no input mesh");
    mesh::Format f = c.format ? *c.format : mesh::format_from_path(c.input);
    return run_flatten(mesh::load_mesh(c.input, f), c);
}

RunResult run_flatten(const mesh::Manifold& m, const FlattenConfig& c)
{
    c.validate();
    auto v = mesh::validate_manifold(m, c.tol);
    if (!v.ok()) {
        const auto& x = v.violations.front();
        throw Error("validate", x.kind + (x.detail.empty() ? "" : ": " + x.detail) + " (" +
                                    std::to_string(v.violations.size()) + " violations)");
    }
    RunResult r;
    r.oriented = mesh::orient_generic(m, c.seed, 256, c.tol);
    Decomposition d = decompose(r.oriented, c.depth, c.area_budget);
    r.slabs = d.slabs;
    r.labels = d.labels;
    r.diagnostics = d.diagnostics;
    r.moving_area = d.moving_area;
    r.budget_rounds = d.budget_rounds;

    // conservation between stages
    json conservation;
    {
        double sa = 0, ma = r.oriented.rotated.surface_area();
        size_t in_walls = 0, pieces = 0;
        for (const auto& s : r.slabs) {
            sa += s.area();
            pieces += s.pieces.size();
            for (const auto& w : s.walls) in_walls += w.pieces.size();
        }
        double rel = std::abs(sa - ma) / std::max(ma, 1e-300);
        conservation = {{"surface_area", ma}, {"slab_area", sa}, {"relative_error", rel},
                        {"pieces", pieces}, {"pieces_in_walls", in_walls},
                        {"pass", rel <= 1e-9 && in_walls == pieces}};
    }
    bool pass = conservation["pass"].get<bool>();

    auto ft = frame_times(c.frames);
    r.states.resize(ft.size());
    std::vector<StateCheck> checks(ft.size());
    fold::StackedFoldedState near;
    parallel_for(static_cast<int>(ft.size()) + 1, c.threads, [&](int i) {
        if (i == static_cast<int>(ft.size())) {
            near = fold_state(d, 1 - 1e-6, c.tol);
            return;
        }
        r.states[i] = fold_state(d, ft[i], c.tol);
    });
    parallel_for(static_cast<int>(ft.size()), c.threads, [&](int i) {
        checks[i] = verify_state(r.states[i], &near, c.tol);
    });
    json frame_summaries = json::array();
    for (size_t i = 0; i < ft.size(); ++i) {
        r.frames.push_back(frame_document(r.states[i], static_cast<int>(i), checks[i].doc));
        pass = pass && checks[i].pass;
        json s = {{"index", i}, {"t", ft[i]}, {"pass", checks[i].pass}};
        for (const auto& rep : checks[i].reports) s[rep.check] = verify::summary(rep);
        frame_summaries.push_back(s);
    }

    json motion = json::object();
    if (c.motion_samples) {
        auto mt = motion_times();
        std::vector<StateCheck> mc(mt.size());
        std::vector<double> worst(mt.size(), 0.0);
        parallel_for(static_cast<int>(mt.size()), c.threads, [&](int i) {
            auto st = fold_state(d, mt[i], c.tol);
            for (const auto& s : st.slabs) worst[i] = std::max(worst[i], s.worst_residual);
            mc[i] = verify_state(st, &near, c.tol);
        });
        bool mp = true;
        json failed = json::array();
        std::map<std::string, verify::Report> merged;
        for (size_t i = 0; i < mt.size(); ++i) {
            mp = mp && mc[i].pass;
            if (!mc[i].pass) failed.push_back(mt[i]);
            for (const auto& rep : mc[i].reports) {
                auto [it, fresh] = merged.try_emplace(rep.check, named(rep.check));
                it->second.merge(rep);
            }
        }
        motion = {{"samples", mt}, {"pass", mp}, {"failed_times", failed},
                  {"worst_gadget_residual", *std::max_element(worst.begin(), worst.end())}};
        for (const auto& [k, rep] : merged) motion[k] = verify::to_json(rep, false);
        pass = pass && mp;
    }

    r.pass = pass;
    r.report = {{"pass", pass},
                {"config", config_json(c)},
                {"rotation_attempts", r.oriented.attempts},
                {"diagnostics", diagnostics_json(r.diagnostics)},
                {"gadgets", gadget_count(r.slabs, r.labels)},
                {"moving_area", r.moving_area},
                {"budget_rounds", r.budget_rounds},
                {"conservation", conservation},
                {"frames", frame_summaries},
                {"motion", motion}};
    if (!checks.empty() && checks.back().doc.contains("flatness_detail"))
        r.report["flatness"] = checks.back().doc["flatness_detail"];
    return r;
}

json frame_document(const fold::StackedFoldedState& s, int index, const json& verification)
{
    json slabs = json::array();
    for (size_t i = 0; i < s.slabs.size(); ++i) {
        json j = sheet_json(s.slabs[i].sheet, s.t > 0 && s.t < 1 && !s.slabs[i].residual);
        j["index"] = s.slabs[i].index;
        j["z"] = json::array({s.z[i][0], s.z[i][1]});
        j["residual"] = s.slabs[i].residual;
        slabs.push_back(std::move(j));
    }
    return {{"frame_schema", kFrameSchema}, {"index", index}, {"t", s.t}, {"slabs", slabs},
            {"verification", verification}};
}

json gadget_document(const std::string& kind, double theta, double alpha, double beta, double t, const Tolerances& tol)
{
    gadget::Kind k = gadget::kind_from_string(kind);
    if (!std::isfinite(t) || t < 0 || t > 1) throw Error("gadget", "t must lie in [0, 1]");
    std::string why = gadget::admissibility_violation(theta, alpha, beta);
    if (!why.empty()) throw Error("gadget", why);
    auto g = gadget::build(gadget::canonical_params(theta, alpha, beta), k);
    auto f = fold::fold_gadget(g, t, tol);
    json labels = json::object();
    for (const auto& [name, id] : f.points) labels[name] = vec_json(f.sheet.x[id]);
    json slab = sheet_json(f.sheet, t > 0 && t < 1);
    slab["index"] = 0;
    slab["z"] = json::array({0.0, f.H});
    slab["residual"] = false;
    json region = json::array();
    for (const auto& v : g.moving_region) region.push_back({v.x(), v.y()});
    json ver = {{"isometry", verify::to_json(verify::check_isometry(g, f, tol.iso), false)},
                {"noncrossing", verify::to_json(verify::check_noncrossing(f.sheet, tol), false)},
                {"containment", verify::to_json(verify::check_containment(f.sheet, 0, f.H, tol.iso), false)},
                {"kawasaki", verify::to_json(verify::check_kawasaki(g, tol.kawasaki), false)}};
    return {{"frame_schema", kFrameSchema},
            {"kind", gadget::to_string(k)},
            {"params", {{"theta", theta}, {"alpha", alpha}, {"beta", beta}, {"t", t}}},
            {"t", t},
            {"H", f.H},
            {"h", f.h},
            {"merged_beta", g.merged_beta},
            {"p_alpha_prime", {f.p_alpha_prime.x(), f.p_alpha_prime.y()}},
            {"labels", labels},
            {"pattern", export_fold(g)},
            {"moving_region", region},
            {"admissibility",
             {{"margin", tol.param_margin},
              {"constraints", {"theta > 0", "alpha > 0", "beta > 0", "theta < alpha + beta", "theta > |alpha - beta|",
                               "alpha + beta <= pi"}}}},
            {"slabs", json::array({slab})},
            {"verification", ver}};
}

bool validate_frame_document(const json& doc, std::string* why)
{
    auto bad = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    if (!doc.is_object()) return bad("not an object");
    if (!doc.contains("frame_schema")) return bad("missing frame_schema");
    if (doc["frame_schema"] != kFrameSchema) return bad("unsupported frame_schema");
    if (!doc.contains("t") || !doc["t"].is_number()) return bad("missing t");
    double t = doc["t"];
    if (t < 0 || t > 1) return bad("t outside [0, 1]");
    if (doc.contains("index") && !doc["index"].is_number_integer()) return bad("index is not an integer");
    if (!doc.contains("slabs") || !doc["slabs"].is_array()) return bad("missing slabs");
    for (const auto& s : doc["slabs"]) {
        if (!s.contains("vertices") || !s["vertices"].is_array()) return bad("slab without vertices");
        if (!s.contains("triangles") || !s["triangles"].is_array()) return bad("slab without triangles");
        const size_t n = s["vertices"].size();
        for (const auto& v : s["vertices"])
            if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
                return bad("vertex is not three numbers");
        for (const auto& tri : s["triangles"]) {
            if (!tri.is_array() || tri.size() != 3) return bad("triangle is not three indices");
            for (const auto& i : tri)
                if (!i.is_number_integer() || i.get<long long>() < 0 || i.get<size_t>() >= n)
                    return bad("triangle index out of range");
        }
    }
    if (!doc.contains("verification") || !doc["verification"].is_object()) return bad("missing verification");
    if (why) why->clear();
    return true;
}

json export_fold(const gadget::GadgetPattern& in)
{
    gadget::GadgetPattern g = in;
    bool unset = std::any_of(g.edges.begin(), g.edges.end(), [](const auto& e) { return e.assignment == 'U'; });
    if (unset) fold::derive_assignments(g);
    json coords = json::array(), ev = json::array(), ea = json::array(), roles = json::array(), faces = json::array();
    for (const auto& v : g.vertices) coords.push_back({v.x(), v.y()});
    for (const auto& e : g.edges) {
        ev.push_back({e.a, e.b});
        ea.push_back(std::string(1, e.assignment));
        roles.push_back(role_name(e.role));
    }
    for (const auto& f : g.faces) faces.push_back(f);
    return {{"file_spec", 1.1},
            {"file_creator", "flatfold"},
            {"file_classes", {"singleModel"}},
            {"frame_classes", {"creasePattern"}},
            {"frame_unit", "unit"},
            {"vertices_coords", coords},
            {"edges_vertices", ev},
            {"edges_assignment", ea},
            {"faces_vertices", faces},
            {"ff:edges_role", roles},
            {"ff:kind", gadget::to_string(g.kind)},
            {"ff:params", {{"theta", g.params.theta}, {"alpha", g.params.alpha}, {"beta", g.params.beta}}},
            {"ff:merged_beta", g.merged_beta},
            {"ff:labels", g.labels}};
}

gadget::GadgetPattern import_fold(const json& doc)
{
    try {
        auto k = gadget::kind_from_string(doc.at("ff:kind").get<std::string>());
        const auto& p = doc.at("ff:params");
        auto g = gadget::build(gadget::canonical_params(p.at("theta"), p.at("alpha"), p.at("beta")), k);
        const auto& coords = doc.at("vertices_coords");
        const auto& ev = doc.at("edges_vertices");
        const auto& ea = doc.at("edges_assignment");
        if (coords.size() != g.vertices.size() || ev.size() != g.edges.size() || ea.size() != g.edges.size())
            throw Error("input", "FOLD document does not match the gadget combinatorics");
        for (size_t i = 0; i < coords.size(); ++i) g.vertices[i] = Vec2(coords[i].at(0), coords[i].at(1));
        for (size_t i = 0; i < ev.size(); ++i) {
            int a = ev[i].at(0), b = ev[i].at(1);
            if (!((a == g.edges[i].a && b == g.edges[i].b) || (a == g.edges[i].b && b == g.edges[i].a)))
                throw Error("input", "edge " + std::to_string(i) + " does not match");
            std::string s = ea[i];
            if (s.size() != 1) throw Error("input", "bad assignment '" + s + "'");
            g.edges[i].assignment = s[0];
            if (doc.contains("ff:edges_role")) g.edges[i].role = role_from_name(doc["ff:edges_role"].at(i));
        }
        return g;
    } catch (const json::exception& e) {
        throw Error("input", std::string("malformed FOLD document: ") + e.what());
    }
}

void write_obj(const fold::StackedFoldedState& s, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("output", "cannot write " + path);
    std::fprintf(f, "# t = %.17g\n", s.t);
    size_t base = 1;
    for (size_t i = 0; i < s.slabs.size(); ++i) {
        const auto& sh = s.slabs[i].sheet;
        std::fprintf(f, "o slab_%zu\n", i);
        for (const auto& x : sh.x) std::fprintf(f, "v %.17g %.17g %.17g\n", x.x(), x.y(), x.z());
        for (const auto& t : sh.tris)
            std::fprintf(f, "f %zu %zu %zu\n", base + t.v[0], base + t.v[1], base + t.v[2]);
        base += sh.x.size();
    }
    std::fclose(f);
}

void write_outputs(const RunResult& r, const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("output", "cannot create " + dir + ": " + ec.message());
    auto dump = [&](const json& j, const fs::path& p) {
        std::ofstream out(p);
        if (!out) throw Error("output", "cannot write " + p.string());
        out << j.dump(1) << "\n";
    };
    for (size_t i = 0; i < r.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu", i);
        dump(r.frames[i], fs::path(dir) / (std::string(name) + ".json"));
        if (i < r.states.size()) write_obj(r.states[i], (fs::path(dir) / (std::string(name) + ".obj")).string());
    }
    dump(r.report, fs::path(dir) / "report.json");
    dump(slicer::slabs_to_json(r.slabs), fs::path(dir) / "slabs.json");
}

} // namespace ff::pipeline
