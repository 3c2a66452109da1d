#include "auxnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "auxnet/errors.hpp"
#include "auxnet/format.hpp"
#include "auxnet/odl.hpp"

namespace auxnet {
namespace {

// Runs job(i) for i in [0, n) on a small worker pool. The first exception
// thrown by any job is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

void prepare_out_dir(const std::filesystem::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::filesystem::path seed_path(const std::filesystem::path& path, std::uint64_t seed, bool many) {
    if (!many) return path;
    auto out = path;
    out.replace_filename(path.stem().string() + "_seed" + std::to_string(seed) + path.extension().string());
    return out;
}

std::size_t odl_features(const Dataset& ds, std::size_t base_features) {
    return base_features == 0 ? ds.num_features : base_features;
}

void write_sweep_csvs(const std::filesystem::path& dir, const std::string& stem,
                      const std::vector<SweepRow>& rows, bool by_b) {
    if (dir.empty()) return;
    prepare_out_dir(dir);
    {
        const auto path = dir / (stem + ".csv");
        auto out = open_output(path);
        out << (by_b ? "B,model,seed,avg_accuracy,avg_loss\n" : "p,seed,avg_accuracy,avg_loss\n");
        for (const auto& r : rows) {
            if (by_b) {
                out << r.base_features << ',' << r.model << ',';
            } else {
                out << format_real(r.p) << ',';
            }
            out << r.seed << ',' << format_real(r.avg_accuracy) << ',' << format_real(r.avg_loss) << '\n';
        }
        check_written(out, path);
    }
    const auto path = dir / (stem + "_means.csv");
    auto out = open_output(path);
    out << (by_b ? "B,model," : "p,") << "mean_accuracy,std_accuracy,mean_loss,std_loss\n";
    for (const auto& s : summarize(rows)) {
        if (by_b) {
            out << s.base_features << ',' << s.model << ',';
        } else {
            out << format_real(s.p) << ',';
        }
        out << format_real(s.accuracy.mean) << ',' << format_real(s.accuracy.std) << ','
            << format_real(s.loss.mean) << ',' << format_real(s.loss.std) << '\n';
    }
    check_written(out, path);
}

struct Cell {
    Mode mode;
    std::size_t base_features;
    double p;
    std::uint64_t seed;
};

std::vector<SweepRow> run_cells(const std::vector<Cell>& cells, const Dataset& ds,
                                const ExperimentConfig& base) {
    std::vector<SweepRow> rows(cells.size());
    parallel_for(cells.size(), base.threads, [&](std::size_t i) {
        const auto& c = cells[i];
        const auto m = run_cell(ds, c.mode, c.base_features, c.p, c.seed, base.network);
        rows[i] = {mode_name(c.mode), c.base_features, c.p, c.seed, m.avg_accuracy(), m.avg_loss()};
    });
    return rows;
}

}  // namespace

const char* mode_name(Mode mode) { return mode == Mode::kAuxNet ? "auxnet" : "odl"; }

Mode parse_mode(const std::string& text) {
    if (text == "auxnet") return Mode::kAuxNet;
    if (text == "odl") return Mode::kOdl;
    throw ContractError("unknown mode '" + text + "' (expected auxnet or odl)");
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    for (const double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

std::string run_tag(Mode mode, std::size_t base_features, double p) {
    std::string tag = std::string(mode_name(mode)) + "_B" + std::to_string(base_features);
    if (mode == Mode::kAuxNet) tag += "_p" + format_real(p);
    return tag;
}

RunMetrics run_cell(const Dataset& ds, Mode mode, std::size_t base_features, double p,
                    std::uint64_t seed, const NetworkConfig& network,
                    const AvailabilitySchedule* schedule) {
    NetworkConfig net = network;
    net.seed = seed;
    net.num_classes = ds.num_classes;
    if (mode == Mode::kOdl) {
        const std::size_t b = odl_features(ds, base_features);
        net.aux_layers = 0;
        net.num_base_features = b;
        return run_odl(net, base_only_stream(ds, b));
    }
    if (base_features < 1 || base_features >= ds.num_features) {
        throw ContractError("auxnet mode needs 1 <= B < " + std::to_string(ds.num_features) +
                            " so at least one auxiliary feature remains, got B=" +
                            std::to_string(base_features));
    }
    net.num_base_features = base_features;
    net.aux_layers = ds.num_features - base_features;
    if (schedule) return run_stream(net, split_stream(ds, base_features, *schedule));
    const auto drawn = make_schedule(ds.size(), net.aux_layers, p, seed);
    return run_stream(net, split_stream(ds, base_features, drawn));
}

void write_steps_csv(std::ostream& out, const RunMetrics& metrics) {
    out << "t,num_active_aux,predicted,actual,step_loss,cum_accuracy,cum_loss\n";
    for (const auto& s : metrics.steps()) {
        out << s.t << ',' << s.num_active_aux << ',' << s.predicted << ',' << s.actual << ','
            << format_real(s.step_loss) << ',' << format_real(s.cum_accuracy) << ','
            << format_real(s.cum_loss) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SeedRun>& runs) {
    const std::string p = cfg.mode == Mode::kAuxNet ? format_real(cfg.p) : "";
    const std::string prefix = std::string(mode_name(cfg.mode)) + ',' + std::to_string(cfg.base_features) + ',' + p + ',';
    out << "mode,base_features,p,seed,avg_accuracy,avg_loss\n";
    std::vector<double> acc, loss;
    for (const auto& r : runs) {
        acc.push_back(r.metrics.avg_accuracy());
        loss.push_back(r.metrics.avg_loss());
        out << prefix << r.seed << ',' << format_real(acc.back()) << ',' << format_real(loss.back()) << '\n';
    }
    const auto a = mean_std(acc);
    const auto l = mean_std(loss);
    out << prefix << "mean," << format_real(a.mean) << ',' << format_real(l.mean) << '\n';
    out << prefix << "std," << format_real(a.std) << ',' << format_real(l.std) << '\n';
}

std::vector<SeedRun> run_experiment(const ExperimentConfig& cfg) {
    return run_experiment(cfg, load_ucr(cfg.dataset));
}

std::vector<SeedRun> run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
    if (cfg.seeds.empty()) throw ContractError("run_experiment: no seeds given");
    ExperimentConfig effective = cfg;
    if (cfg.mode == Mode::kOdl) effective.base_features = odl_features(ds, cfg.base_features);

    const bool many = cfg.seeds.size() > 1;
    std::vector<std::optional<AvailabilitySchedule>> schedules(cfg.seeds.size());
    if (cfg.mode == Mode::kAuxNet) {
        if (effective.base_features < 1 || effective.base_features >= ds.num_features) {
            throw ContractError("auxnet mode needs 1 <= B < " + std::to_string(ds.num_features) +
                                ", got B=" + std::to_string(effective.base_features));
        }
        const std::size_t num_aux = ds.num_features - effective.base_features;
        std::optional<AvailabilitySchedule> replay;
        if (cfg.schedule_in) replay = load_schedule(*cfg.schedule_in);
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
            schedules[i] = replay ? *replay : make_schedule(ds.size(), num_aux, cfg.p, cfg.seeds[i]);
            if (cfg.schedule_out) save_schedule(seed_path(*cfg.schedule_out, cfg.seeds[i], many), *schedules[i]);
        }
    }

    std::vector<SeedRun> runs(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
        runs[i].seed = cfg.seeds[i];
        runs[i].metrics = run_cell(ds, cfg.mode, effective.base_features, cfg.p, cfg.seeds[i],
                                   cfg.network, schedules[i] ? &*schedules[i] : nullptr);
    });

    if (!cfg.out_dir.empty()) {
        prepare_out_dir(cfg.out_dir);
        const auto tag = run_tag(cfg.mode, effective.base_features, cfg.p);
        for (const auto& r : runs) {
            const auto path = cfg.out_dir / ("steps_" + tag + "_seed" + std::to_string(r.seed) + ".csv");
            auto out = open_output(path);
            write_steps_csv(out, r.metrics);
            check_written(out, path);
        }
        const auto path = cfg.out_dir / ("summary_" + tag + ".csv");
        auto out = open_output(path);
        write_summary_csv(out, effective, runs);
        check_written(out, path);
    }
    return runs;
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows) {
    std::vector<SweepSummary> out;
    std::vector<std::vector<double>> acc, loss;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const SweepSummary& s) {
            return s.model == r.model && s.base_features == r.base_features && s.p == r.p;
        });
        std::size_t k = static_cast<std::size_t>(it - out.begin());
        if (it == out.end()) {
            out.push_back({r.model, r.base_features, r.p, {}, {}});
            acc.emplace_back();
            loss.emplace_back();
        }
        acc[k].push_back(r.avg_accuracy);
        loss[k].push_back(r.avg_loss);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].accuracy = mean_std(acc[k]);
        out[k].loss = mean_std(loss[k]);
    }
    return out;
}

std::vector<SweepRow> sweep_p(const ExperimentConfig& base, const Dataset& ds, const std::vector<double>& ps) {
    if (base.seeds.empty()) throw ContractError("sweep_p: no seeds given");
    std::vector<Cell> cells;
    for (const double p : ps) {
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("sweep_p: p=" + format_real(p) + " outside [0, 1]");
        for (const auto seed : base.seeds) cells.push_back({Mode::kAuxNet, base.base_features, p, seed});
    }
    auto rows = run_cells(cells, ds, base);
    write_sweep_csvs(base.out_dir, "sweep_p", rows, false);
    return rows;
}

std::vector<SweepRow> sweep_b(const ExperimentConfig& base, const Dataset& ds,
                              const std::vector<std::size_t>& bs) {
    if (base.seeds.empty()) throw ContractError("sweep_b: no seeds given");
    std::vector<Cell> cells;
    for (const auto b : bs) {
        if (b < 1 || b >= ds.num_features) {
            throw ContractError("sweep_b: B=" + std::to_string(b) + " outside [1, " +
                                std::to_string(ds.num_features - 1) + "]");
        }
        for (const auto seed : base.seeds) {
            cells.push_back({Mode::kAuxNet, b, base.p, seed});
            cells.push_back({Mode::kOdl, b, base.p, seed});
        }
    }
    auto rows = run_cells(cells, ds, base);
    // Group Aux-Net and ODL rows per B for readability.
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.base_features != b.base_features ? a.base_features < b.base_features : a.model < b.model;
    });
    write_sweep_csvs(base.out_dir, "sweep_b", rows, true);
    return rows;
}

}  // namespace auxnet
