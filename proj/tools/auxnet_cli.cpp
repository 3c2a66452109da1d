// auxnet: command line driver for online Aux-Net / ODL experiments.
//
//   auxnet run      --dataset FILE [--mode auxnet|odl] [--base-features B] [--prob P] ...
//   auxnet sweep-p  --dataset FILE --prob 0.5,0.6,... [--base-features B] ...
//   auxnet sweep-b  --dataset FILE [--base-features 1,4,8] [--prob P] ...
//   auxnet gradcheck [--seeds 0] [--cases 6] [--tolerance 1e-5]

#include <cstdio>
#include <exception>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "auxnet/format.hpp"
#include "auxnet/gradcheck.hpp"
#include "auxnet/harness.hpp"

namespace {

struct Options {
    std::string dataset;
    std::string mode = "auxnet";
    std::vector<std::size_t> base_features;
    std::vector<double> probs;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    double eta = 0.01;
    double beta = 0.99;
    double lambda = 0.2;
    std::size_t layers_base = 5;
    std::size_t layers_end = 5;
    std::size_t nodes = 50;
    std::string schedule_in;
    std::string schedule_out;
    std::string out_dir;
    std::size_t threads = 0;
    std::size_t cases = 6;
    double tolerance = 1e-5;
};

void add_network_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--dataset", o.dataset, "UCR-format data file (label first, tab/comma separated)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seeds", o.seeds, "Seeds, one run each")->delimiter(',');
    cmd->add_option("--eta", o.eta, "Adam learning rate");
    cmd->add_option("--beta", o.beta, "Hedge discount rate in (0,1)");
    cmd->add_option("--lambda", o.lambda, "Hedge smoothing floor in (0,1)");
    cmd->add_option("--layers-base", o.layers_base, "Base layers (S)");
    cmd->add_option("--layers-end", o.layers_end, "End layers (E)");
    cmd->add_option("--nodes", o.nodes, "Nodes per hidden layer");
    cmd->add_option("--out-dir", o.out_dir, "Directory for CSV output");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

auxnet::ExperimentConfig experiment_from(const Options& o) {
    auxnet::ExperimentConfig cfg;
    cfg.dataset = o.dataset;
    cfg.mode = auxnet::parse_mode(o.mode);
    cfg.seeds = o.seeds;
    cfg.network.eta = o.eta;
    cfg.network.beta = o.beta;
    cfg.network.lambda = o.lambda;
    cfg.network.base_layers = o.layers_base;
    cfg.network.end_layers = o.layers_end;
    cfg.network.nodes = o.nodes;
    cfg.network.validate();
    cfg.out_dir = o.out_dir;
    cfg.threads = o.threads;
    if (!o.schedule_in.empty()) cfg.schedule_in = o.schedule_in;
    if (!o.schedule_out.empty()) cfg.schedule_out = o.schedule_out;
    return cfg;
}

void print_summaries(const std::vector<auxnet::SweepRow>& rows) {
    std::printf("%-7s %4s %6s %10s %8s %10s %8s\n", "model", "B", "p", "acc_mean", "acc_std", "loss_mean",
                "loss_std");
    for (const auto& s : auxnet::summarize(rows)) {
        std::printf("%-7s %4zu %6.3f %10.4f %8.4f %10.4f %8.4f\n", s.model.c_str(), s.base_features, s.p,
                    s.accuracy.mean, s.accuracy.std, s.loss.mean, s.loss.std);
    }
}

int cmd_run(const Options& o) {
    auto cfg = experiment_from(o);
    if (o.base_features.size() > 1) throw CLI::ValidationError("--base-features", "run takes a single value");
    if (o.probs.size() > 1) throw CLI::ValidationError("--prob", "run takes a single value");
    const auto ds = auxnet::load_ucr(cfg.dataset);
    if (!o.base_features.empty()) {
        cfg.base_features = o.base_features.front();
    } else if (cfg.mode == auxnet::Mode::kOdl) {
        cfg.base_features = 0;
    } else {
        cfg.base_features = ds.num_features / 2;
    }
    if (!o.probs.empty()) cfg.p = o.probs.front();

    const auto runs = auxnet::run_experiment(cfg, ds);
    std::vector<double> acc, loss;
    for (const auto& r : runs) {
        acc.push_back(r.metrics.avg_accuracy());
        loss.push_back(r.metrics.avg_loss());
        std::printf("seed %llu: avg_accuracy=%.4f avg_loss=%.4f\n", static_cast<unsigned long long>(r.seed),
                    acc.back(), loss.back());
    }
    const auto a = auxnet::mean_std(acc);
    const auto l = auxnet::mean_std(loss);
    std::printf("mean: avg_accuracy=%.4f (std %.4f) avg_loss=%.4f (std %.4f)\n", a.mean, a.std, l.mean, l.std);
    return 0;
}

int cmd_sweep_p(const Options& o) {
    auto cfg = experiment_from(o);
    if (o.base_features.size() > 1) throw CLI::ValidationError("--base-features", "sweep-p takes a single value");
    const auto ds = auxnet::load_ucr(cfg.dataset);
    cfg.base_features = o.base_features.empty() ? ds.num_features / 2 : o.base_features.front();
    std::vector<double> ps = o.probs;
    if (ps.empty()) ps = {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0};
    print_summaries(auxnet::sweep_p(cfg, ds, ps));
    return 0;
}

int cmd_sweep_b(const Options& o) {
    auto cfg = experiment_from(o);
    if (o.probs.size() > 1) throw CLI::ValidationError("--prob", "sweep-b takes a single value");
    cfg.p = o.probs.empty() ? 0.9 : o.probs.front();
    const auto ds = auxnet::load_ucr(cfg.dataset);
    std::vector<std::size_t> bs = o.base_features;
    if (bs.empty()) {
        bs.resize(ds.num_features - 1);
        std::iota(bs.begin(), bs.end(), std::size_t{1});
    }
    print_summaries(auxnet::sweep_b(cfg, ds, bs));
    return 0;
}

int cmd_gradcheck(const Options& o) {
    const auto seed = o.seeds.empty() ? 0 : o.seeds.front();
    const auto cases = auxnet::run_gradcheck_suite(seed, o.cases);
    double worst = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& c = cases[k];
        std::string active;
        for (const auto j : c.active_aux) active += (active.empty() ? "" : ",") + std::to_string(j);
        std::printf("case %zu: active_aux={%s} params=%zu max_rel_error=%.3e (layer %zu %s[%zu])\n", k,
                    active.c_str(), c.report.checked, c.report.max_rel_error, c.report.worst.layer,
                    c.report.worst.param.c_str(), c.report.worst.index);
        worst = std::max(worst, c.report.max_rel_error);
    }
    const bool ok = worst <= o.tolerance;
    std::printf("%s: worst relative error %.3e (tolerance %.1e)\n", ok ? "PASS" : "FAIL", worst, o.tolerance);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online Aux-Net and ODL experiment driver"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Prequential run, one per seed; writes per-step and summary CSVs");
    add_network_flags(run, o);
    run->add_option("--mode", o.mode, "auxnet or odl")->check(CLI::IsMember({"auxnet", "odl"}));
    run->add_option("--base-features", o.base_features,
                    "Base feature count B (odl: input width, default all features)");
    run->add_option("--prob", o.probs, "Availability probability of each auxiliary feature");
    run->add_option("--schedule-in", o.schedule_in, "Replay an availability schedule file")
        ->check(CLI::ExistingFile);
    run->add_option("--schedule-out", o.schedule_out, "Export the availability schedule (per seed)");

    auto* sweep_p = app.add_subcommand("sweep-p", "Aux-Net over a grid of availability probabilities");
    add_network_flags(sweep_p, o);
    sweep_p->add_option("--base-features", o.base_features, "Base feature count B");
    sweep_p->add_option("--prob", o.probs, "Comma separated p values")->delimiter(',');

    auto* sweep_b = app.add_subcommand("sweep-b", "Aux-Net vs ODL over base feature counts");
    add_network_flags(sweep_b, o);
    sweep_b->add_option("--base-features", o.base_features, "Comma separated B values (default 1..F-1)")
        ->delimiter(',');
    sweep_b->add_option("--prob", o.probs, "Availability probability (default 0.9)");

    auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of the analytic gradients");
    grad->add_option("--seeds", o.seeds, "Seed (first value used)")->delimiter(',');
    grad->add_option("--cases", o.cases, "Number of random (input, label, active set) cases");
    grad->add_option("--tolerance", o.tolerance, "Maximum accepted relative error");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(o);
        if (*sweep_p) return cmd_sweep_p(o);
        if (*sweep_b) return cmd_sweep_b(o);
        if (*grad) return cmd_gradcheck(o);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "auxnet: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
