#include "ff/pipeline.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>

using namespace ff;
using namespace ff::pipeline;

namespace {

FrameServer* g_server = nullptr;

void on_signal(int)
{
    if (g_server) g_server->stop();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Continuous flattening of a polyhedral surface"};
    // every flag is kept as text and applied through the same parser as the config file
    std::vector<std::pair<std::string, std::string>> flags = {
        {"input", "mesh file (.off or .obj)"},
        {"format", "off or obj; default from the extension"},
        {"seed", "seed for the generic rotation"},
        {"depth", "bisection depth for non-prismoidal slabs"},
        {"frames", "number of output frames on [0, 1]"},
        {"area-budget", "upper bound on the total moving crease area"},
        {"out", "output directory"},
        {"serve", "host:port to serve frames on after the run"},
        {"tol-iso", "isometry tolerance"},
        {"tol-solve", "root solve tolerance"},
        {"threads", "worker threads, 0 for all cores"},
        {"motion-samples", "also verify the dense time grid (true/false)"},
    };
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
    for (const auto& [name, help] : flags) opts[name] = app.add_option("--" + name, values[name], help);
    std::string config;
    app.add_option("--config", config, "key = value file; flags override it");
    CLI11_PARSE(app, argc, argv);

    try {
        FlattenConfig c = config.empty() ? FlattenConfig{} : load_config(config);
        for (const auto& [name, _] : flags)
            if (opts[name]->count() > 0) apply_setting(c, name, values[name]);
        c.validate();

        auto t0 = std::chrono::steady_clock::now();
        RunResult r = run_flatten(c);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!c.out.empty()) write_outputs(r, c.out);

        const auto& rep = r.report;
        std::printf("slabs %d, residual %d, gadgets %d, moving area %.6g\n", r.diagnostics.slab_count,
                    r.diagnostics.residual_nonprismoidal_count, rep["gadgets"].get<int>(), r.moving_area);
        for (const auto& f : rep["frames"]) {
            std::printf("frame %3d t=%.4f %s\n", f["index"].get<int>(), f["t"].get<double>(),
                        f["pass"].get<bool>() ? "ok" : "FAILED");
            if (!f["pass"].get<bool>())
                for (const auto& [k, v] : f.items())
                    if (v.is_string() && v.get<std::string>().rfind("FAIL", 0) == 0)
                        std::printf("    %s\n", v.get<std::string>().c_str());
        }
        if (rep["motion"].contains("pass"))
            std::printf("motion samples: %s\n", rep["motion"]["pass"].get<bool>() ? "ok" : "FAILED");
        std::printf("%s (%.1f s)\n", r.pass ? "PASS" : "FAIL", seconds);

        if (!c.serve.empty()) {
            auto colon = c.serve.rfind(':');
            if (colon == std::string::npos) throw Error("config", "serve expects host:port");
            std::string host = c.serve.substr(0, colon);
            int port = std::stoi(c.serve.substr(colon + 1));
            FrameServer server(r.frames);
            int bound = server.bind(host, port);
            if (bound <= 0) throw Error("serve", "cannot bind " + c.serve);
            std::printf("serving %zu frames on http://%s:%d\n", r.frames.size(), host.c_str(), bound);
            std::fflush(stdout);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            server.listen();
            g_server = nullptr;
        }
        return r.pass ? 0 : 1;
    } catch (const Error& e) {
        std::string what = e.what();
        if (what.rfind(e.stage() + ": ", 0) == 0) what = what.substr(e.stage().size() + 2);
        std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), what.c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
