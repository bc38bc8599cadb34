#pragma once

#include "ff/fold.hpp"
#include "ff/gadget.hpp"
#include "ff/mesh.hpp"
#include "ff/slicer.hpp"
#include "ff/verify.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ff::pipeline {

inline constexpr int kFrameSchema = 1;

struct FlattenConfig {
    std::string input;
    std::optional<mesh::Format> format;
    std::uint64_t seed = 1;
    int depth = 6;
    int frames = 17;
    std::optional<double> area_budget;
    Tolerances tol;
    std::string out;            // empty: nothing written
    std::string serve;          // "host:port", empty: no server
    bool motion_samples = true; // verify at the dense motion grid as well as at frames
    int threads = 0;            // 0: hardware concurrency

    void validate() const;
};

// key = value lines, '#' comments; keys match the long CLI flag names.
FlattenConfig load_config(const std::string& path);
void apply_setting(FlattenConfig& c, const std::string& key, const std::string& value);

// 33 uniform samples on [0,1] plus 10 geometric samples approaching 1.
std::vector<double> motion_times();
std::vector<double> frame_times(int count);

struct RunResult {
    bool pass = false;
    std::vector<nlohmann::json> frames;        // frame documents in time order
    nlohmann::json report;                     // all verification records + diagnostics
    slicer::SliceDiagnostics diagnostics;
    std::vector<slicer::Slab> slabs;
    std::vector<std::vector<gadget::WallLabeling>> labels;
    mesh::OrientedManifold oriented;
    double moving_area = 0;
    int budget_rounds = 0;
    std::vector<fold::StackedFoldedState> states;   // one per frame
};

RunResult run_flatten(const FlattenConfig& c);
RunResult run_flatten(const mesh::Manifold& m, const FlattenConfig& c);

// Pieces of run_flatten that tests drive directly.
struct Decomposition {
    std::vector<slicer::Slab> slabs;
    std::vector<std::vector<gadget::WallLabeling>> labels;
    slicer::SliceDiagnostics diagnostics;
    double moving_area = 0;
    int budget_rounds = 0;
};
Decomposition decompose(const mesh::OrientedManifold& om, int depth, std::optional<double> area_budget);
double total_moving_area(const std::vector<slicer::Slab>& slabs,
                         const std::vector<std::vector<gadget::WallLabeling>>& labels);
fold::StackedFoldedState fold_state(const Decomposition& d, double t, const Tolerances& tol);

nlohmann::json frame_document(const fold::StackedFoldedState& s, int index, const nlohmann::json& verification);
nlohmann::json gadget_document(const std::string& kind, double theta, double alpha, double beta, double t,
                               const Tolerances& tol = {});
bool validate_frame_document(const nlohmann::json& doc, std::string* why = nullptr);

nlohmann::json export_fold(const gadget::GadgetPattern& g);
gadget::GadgetPattern import_fold(const nlohmann::json& doc);

void write_obj(const fold::StackedFoldedState& s, const std::string& path);
void write_outputs(const RunResult& r, const std::string& dir);

// Local HTTP endpoint: GET /frames/{i}, GET /gadget?kind=&theta=&alpha=&beta=&t=
class FrameServer {
public:
    explicit FrameServer(std::vector<nlohmann::json> frames);
    ~FrameServer();
    int bind(const std::string& host, int port);   // port 0 picks a free port
    void listen();                                 // blocking
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ff::pipeline
