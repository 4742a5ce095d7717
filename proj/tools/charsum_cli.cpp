// Command-line driver for verification campaigns.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "charsum/campaign.hpp"

namespace cs = charsum;
namespace cc = charsum::campaign;

int main(int argc, char** argv) {
    CLI::App app{"Character sums over affine subspaces of finite fields: verification campaigns"};
    argv = app.ensure_utf8(argv);

    cc::CampaignConfig flags;
    std::string config_path;
    std::size_t n = 0, d = 0;
    app.add_option("--config", config_path, "JSON config file; flags override its keys");
    auto* mode = app.add_option("--mode", flags.mode, "verify-classic | lfunction | scan | census | param");
    auto* p = app.add_option("--p", flags.p, "characteristic(s)")->delimiter(',');
    auto* a = app.add_option("--a", flags.a, "extension degree(s) over F_p")->delimiter(',');
    auto* n_opt = app.add_option("--n", n, "ambient dimension");
    auto* d_opt = app.add_option("--d", d, "subspace dimension");
    auto* chars = app.add_option("--chars", flags.chars, "exponent list e1,e2,..., all-nontrivial, or random");
    auto* inst = app.add_option("--instances", flags.instances, "<path> | random:COUNT | exhaustive");
    auto* seed = app.add_option("--seed", flags.seed, "seed for the SplitMix64 instance stream");
    auto* cap = app.add_option("--cap", flags.cap, "enumeration cap on points per character sum");
    auto* extra = app.add_option("--extra", flags.extra, "consistency power sums beyond D_L");
    auto* out = app.add_option("--out", flags.out, "report path (stdout when omitted)");
    auto* format = app.add_option("--format", flags.format, "json | csv");
    auto* threads = app.add_option("--threads", flags.threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

    try {
        cc::CampaignConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw cs::Error(cs::ErrorKind::ConfigInvalid, "cannot open config " + config_path);
            cs::json j;
            try {
                in >> j;
            } catch (const cs::json::exception& e) {
                throw cs::Error(cs::ErrorKind::ConfigInvalid, e.what());
            }
            cfg = cc::config_from_json(j);
        }
        if (mode->count()) cfg.mode = flags.mode;
        if (p->count()) cfg.p = flags.p;
        if (a->count()) cfg.a = flags.a;
        if (n_opt->count()) cfg.n = n;
        if (d_opt->count()) cfg.d = d;
        if (chars->count()) cfg.chars = flags.chars;
        if (inst->count()) cfg.instances = flags.instances;
        if (seed->count()) cfg.seed = flags.seed;
        if (cap->count()) cfg.cap = flags.cap;
        if (extra->count()) cfg.extra = flags.extra;
        if (out->count()) cfg.out = flags.out;
        if (format->count()) cfg.format = flags.format;
        if (threads->count()) cfg.threads = flags.threads;

        const cc::Report report = cc::run(cfg);
        const std::string body = cfg.format == "csv" ? report.to_csv() : report.to_json(cfg).dump(2) + "\n";
        if (cfg.out.empty()) {
            std::cout << body;
        } else {
            std::ofstream(cfg.out) << body;
            for (std::size_t k = 0; k < report.failures.size(); ++k)
                std::ofstream(cfg.out + ".failure-" + std::to_string(k) + ".json") << report.failures[k].dump(2) << "\n";
        }
        for (const auto& f : report.failures) std::cerr << "FAILED: " << f.at("error").get<std::string>() << "\n";
        std::cerr << "summary: " << report.summary.dump() << "\n";
        return report.ok() ? 0 : 1;
    } catch (const cs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
