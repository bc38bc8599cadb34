#include "ff/pipeline.hpp"

#include "httplib.h"

namespace ff::pipeline {

using nlohmann::json;

struct FrameServer::Impl {
    std::vector<json> frames;
    httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const json& j)
{
    res.status = status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(j.dump(), "application/json");
}

double number_param(const httplib::Request& req, const std::string& name)
{
    if (!req.has_param(name)) throw Error("request", "missing parameter " + name);
    std::string v = req.get_param_value(name);
    size_t used = 0;
    double x;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw Error("request", "bad number for " + name);
    }
    if (used != v.size()) throw Error("request", "bad number for " + name);
    return x;
}

} // namespace

FrameServer::FrameServer(std::vector<json> frames) : impl_(std::make_unique<Impl>())
{
    impl_->frames = std::move(frames);
    Impl* p = impl_.get();
    p->server.Get(R"(/frames/(\d+))", [p](const httplib::Request& req, httplib::Response& res) {
        size_t i = 0;
        try {
            i = std::stoul(req.matches[1].str());
        } catch (const std::exception&) {
            i = p->frames.size();
        }
        if (i >= p->frames.size()) {
            send_json(res, 404, {{"error", "no frame " + req.matches[1].str()}});
            return;
        }
        send_json(res, 200, p->frames[i]);
    });
    p->server.Get("/frames", [p](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"count", p->frames.size()}});
    });
    p->server.Get("/gadget", [](const httplib::Request& req, httplib::Response& res) {
        try {
            if (!req.has_param("kind")) throw Error("request", "missing parameter kind");
            json doc = gadget_document(req.get_param_value("kind"), number_param(req, "theta"),
                                       number_param(req, "alpha"), number_param(req, "beta"), number_param(req, "t"));
            send_json(res, 200, doc);
        } catch (const Error& e) {
            send_json(res, 400, {{"error", e.what()}, {"stage", e.stage()}});
        }
    });
}

FrameServer::~FrameServer() { stop(); }

int FrameServer::bind(const std::string& host, int port)
{
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void FrameServer::listen() { impl_->server.listen_after_bind(); }

void FrameServer::stop()
{
    if (impl_) impl_->server.stop();
}

} // namespace ff::pipeline
