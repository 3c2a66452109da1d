#include "auxnet/stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "auxnet/errors.hpp"
#include "auxnet/format.hpp"

namespace auxnet {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

enum class Delimiter { kTab, kComma, kWhitespace };

Delimiter detect_delimiter(std::string_view line) {
    if (line.find('\t') != std::string_view::npos) return Delimiter::kTab;
    if (line.find(',') != std::string_view::npos) return Delimiter::kComma;
    return Delimiter::kWhitespace;
}

std::vector<std::string_view> split_fields(std::string_view line, Delimiter delim) {
    std::vector<std::string_view> fields;
    if (delim == Delimiter::kWhitespace) {
        std::size_t pos = 0;
        while (pos < line.size()) {
            const auto start = line.find_first_not_of(" \t", pos);
            if (start == std::string_view::npos) break;
            auto end = line.find_first_of(" \t", start);
            if (end == std::string_view::npos) end = line.size();
            fields.push_back(line.substr(start, end - start));
            pos = end;
        }
        return fields;
    }
    const char sep = delim == Delimiter::kTab ? '\t' : ',';
    std::size_t start = 0;
    while (true) {
        const auto end = line.find(sep, start);
        fields.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return fields;
}

// Numeric labels sort numerically, anything else lexicographically.
std::vector<std::string> sorted_labels(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
        double v;
        return parse_real(s, v);
    });
    if (numeric) {
        std::stable_sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
            double x = 0, y = 0;
            parse_real(a, x);
            parse_real(b, y);
            return x < y;
        });
    }
    return labels;
}

}  // namespace

Dataset parse_ucr(std::istream& in, std::string name) {
    Dataset ds;
    ds.name = std::move(name);
    std::vector<std::string> raw_labels;
    std::optional<Delimiter> delim;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        if (!delim) delim = detect_delimiter(body);
        const auto fields = split_fields(body, *delim);
        if (fields.size() < 2) {
            throw DataError(ds.name + ":" + std::to_string(line_no) +
                            ": expected a label and at least one feature");
        }
        const std::size_t nfeat = fields.size() - 1;
        if (ds.instances.empty()) {
            ds.num_features = nfeat;
        } else if (nfeat != ds.num_features) {
            throw DataError(ds.name + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(ds.num_features) + " features, got " +
                            std::to_string(nfeat));
        }
        LabeledInstance inst;
        inst.features.resize(nfeat);
        for (std::size_t k = 0; k < nfeat; ++k) {
            if (!parse_real(fields[k + 1], inst.features[k]) || !std::isfinite(inst.features[k])) {
                throw DataError(ds.name + ":" + std::to_string(line_no) + ": bad value '" +
                                std::string(fields[k + 1]) + "' in column " + std::to_string(k + 2));
            }
        }
        if (fields[0].empty()) {
            throw DataError(ds.name + ":" + std::to_string(line_no) + ": empty label");
        }
        raw_labels.emplace_back(fields[0]);
        ds.instances.push_back(std::move(inst));
    }

    if (ds.instances.empty()) throw DataError(ds.name + ": no instances");
    ds.original_labels = sorted_labels(raw_labels);
    ds.num_classes = ds.original_labels.size();
    for (std::size_t i = 0; i < ds.instances.size(); ++i) {
        const auto it = std::find(ds.original_labels.begin(), ds.original_labels.end(), raw_labels[i]);
        ds.instances[i].label = static_cast<std::size_t>(it - ds.original_labels.begin());
    }
    return ds;
}

Dataset load_ucr(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
    return parse_ucr(in, path.string());
}

std::size_t AvailabilitySchedule::available_at(std::size_t t) const {
    return static_cast<std::size_t>(std::count(masks.at(t).begin(), masks.at(t).end(), true));
}

AvailabilitySchedule make_schedule(std::size_t length, std::size_t num_aux, double p,
                                   std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractError("make_schedule: p must lie in [0, 1]");
    AvailabilitySchedule sched;
    sched.num_aux = num_aux;
    sched.p = p;
    sched.seed = seed;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x5c4edu};  // stream tag: decorrelates from weight init
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution draw(p);
    sched.masks.assign(length, std::vector<bool>(num_aux, false));
    for (auto& row : sched.masks) {
        for (std::size_t a = 0; a < num_aux; ++a) row[a] = draw(rng);
    }
    return sched;
}

void write_schedule(std::ostream& out, const AvailabilitySchedule& schedule) {
    out << "# p=" << format_real(schedule.p) << " seed=" << schedule.seed
        << " A=" << schedule.num_aux << '\n';
    for (const auto& row : schedule.masks) {
        for (std::size_t a = 0; a < row.size(); ++a) {
            if (a) out << ' ';
            out << (row[a] ? '1' : '0');
        }
        out << '\n';
    }
}

AvailabilitySchedule read_schedule(std::istream& in) {
    AvailabilitySchedule sched;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw DataError("schedule: missing '# p=<p> seed=<seed> A=<A>' header");
    }
    bool have_p = false, have_seed = false, have_a = false;
    std::istringstream header(line.substr(2));
    std::string token;
    while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        try {
            if (key == "p") {
                have_p = parse_real(value, sched.p);
            } else if (key == "seed") {
                sched.seed = std::stoull(value);
                have_seed = true;
            } else if (key == "A") {
                sched.num_aux = std::stoull(value);
                have_a = true;
            }
        } catch (const std::exception&) {
            throw DataError("schedule: bad header field '" + token + "'");
        }
    }
    if (!have_p || !have_seed || !have_a) throw DataError("schedule: incomplete header '" + line + "'");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() && sched.num_aux > 0) continue;
        std::vector<bool> row;
        for (const auto field : split_fields(body, Delimiter::kWhitespace)) {
            if (field != "0" && field != "1") {
                throw DataError("schedule:" + std::to_string(line_no) + ": expected 0/1, got '" +
                                std::string(field) + "'");
            }
            row.push_back(field == "1");
        }
        if (row.size() != sched.num_aux) {
            throw DataError("schedule:" + std::to_string(line_no) + ": expected " +
                            std::to_string(sched.num_aux) + " entries, got " +
                            std::to_string(row.size()));
        }
        sched.masks.push_back(std::move(row));
    }
    return sched;
}

void save_schedule(const std::filesystem::path& path, const AvailabilitySchedule& schedule) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write schedule '" + path.string() + "'");
    write_schedule(out, schedule);
    if (!out) throw IoError("error writing schedule '" + path.string() + "'");
}

AvailabilitySchedule load_schedule(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schedule '" + path.string() + "'");
    return read_schedule(in);
}

std::vector<StreamInstance> split_stream(const Dataset& ds, std::size_t num_base,
                                         const AvailabilitySchedule& schedule) {
    if (num_base < 1 || num_base >= ds.num_features) {
        throw ContractError("split_stream: base feature count " + std::to_string(num_base) +
                            " must lie in [1, " + std::to_string(ds.num_features - 1) + "]");
    }
    const std::size_t num_aux = ds.num_features - num_base;
    if (schedule.num_aux != num_aux) {
        throw ContractError("split_stream: schedule covers " + std::to_string(schedule.num_aux) +
                            " auxiliary features, dataset has " + std::to_string(num_aux));
    }
    if (schedule.size() < ds.size()) {
        throw ContractError("split_stream: schedule has " + std::to_string(schedule.size()) +
                            " steps, dataset has " + std::to_string(ds.size()));
    }
    std::vector<StreamInstance> out;
    out.reserve(ds.size());
    for (std::size_t t = 0; t < ds.size(); ++t) {
        const auto& inst = ds.instances[t];
        StreamInstance s;
        s.t = t;
        s.label = inst.label;
        s.x_base.assign(inst.features.begin(), inst.features.begin() + num_base);
        for (std::size_t a = 0; a < num_aux; ++a) {
            if (schedule.masks[t][a]) s.x_aux.emplace(a, inst.features[num_base + a]);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<StreamInstance> base_only_stream(const Dataset& ds, std::size_t num_features) {
    if (num_features < 1 || num_features > ds.num_features) {
        throw ContractError("base_only_stream: feature count " + std::to_string(num_features) +
                            " must lie in [1, " + std::to_string(ds.num_features) + "]");
    }
    std::vector<StreamInstance> out;
    out.reserve(ds.size());
    for (std::size_t t = 0; t < ds.size(); ++t) {
        StreamInstance s;
        s.t = t;
        s.label = ds.instances[t].label;
        s.x_base.assign(ds.instances[t].features.begin(),
                        ds.instances[t].features.begin() + num_features);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace auxnet
