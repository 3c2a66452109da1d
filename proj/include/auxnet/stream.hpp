#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "auxnet/numeric.hpp"

namespace auxnet {

struct LabeledInstance {
    Vector features;
    std::size_t label = 0;
};

struct Dataset {
    std::string name;
    std::vector<LabeledInstance> instances;
    std::size_t num_features = 0;
    std::size_t num_classes = 0;
    // original_labels[k] is the archive label mapped to class index k.
    std::vector<std::string> original_labels;

    std::size_t size() const { return instances.size(); }
};

// Reads a UCR-style text file: one instance per line, class label first,
// then the feature values. Tab, comma or whitespace separated (detected per
// file from the first data line). Labels are remapped to 0..C-1 in ascending
// order of the original labels. Throws DataError naming the offending line.
Dataset load_ucr(const std::filesystem::path& path);
Dataset parse_ucr(std::istream& in, std::string name = "stream");

// Sparse auxiliary values keyed by 0-based auxiliary index.
using AuxValues = std::map<std::size_t, double>;

struct StreamInstance {
    std::size_t t = 0;
    Vector x_base;
    AuxValues x_aux;
    std::size_t label = 0;

    std::size_t dimension() const { return x_base.size() + x_aux.size(); }
};

struct AvailabilitySchedule {
    std::size_t num_aux = 0;
    double p = 1.0;
    std::uint64_t seed = 0;
    std::vector<std::vector<bool>> masks;  // masks[t][a]

    std::size_t size() const { return masks.size(); }
    std::size_t available_at(std::size_t t) const;
    bool operator==(const AvailabilitySchedule&) const = default;
};

// Independent Bernoulli(p) availability for every (step, aux feature).
AvailabilitySchedule make_schedule(std::size_t length, std::size_t num_aux, double p,
                                   std::uint64_t seed);

// Text format: header "# p=<p> seed=<seed> A=<A>", then one line of
// space-separated 0/1 per step.
void write_schedule(std::ostream& out, const AvailabilitySchedule& schedule);
AvailabilitySchedule read_schedule(std::istream& in);
void save_schedule(const std::filesystem::path& path, const AvailabilitySchedule& schedule);
AvailabilitySchedule load_schedule(const std::filesystem::path& path);

// Features [0, B) become the base vector; feature B + a is auxiliary index a
// and is present at step t iff schedule.masks[t][a].
std::vector<StreamInstance> split_stream(const Dataset& ds, std::size_t num_base,
                                         const AvailabilitySchedule& schedule);

// Every instance truncated to its first `num_features` features, all treated
// as base. This is the input regime of the fixed-dimension baseline.
std::vector<StreamInstance> base_only_stream(const Dataset& ds, std::size_t num_features);

}  // namespace auxnet
