#pragma once

#include <cstddef>
#include <vector>

namespace auxnet {

struct StepRecord {
    std::size_t t = 0;
    std::size_t num_active_aux = 0;
    std::size_t predicted = 0;
    std::size_t actual = 0;
    double step_loss = 0.0;
    double cum_accuracy = 0.0;
    double cum_loss = 0.0;
};

// Prequential metrics: every prediction is made before the model trains on
// the instance.
class RunMetrics {
public:
    void record(std::size_t num_active_aux, std::size_t predicted, std::size_t actual,
                double step_loss);

    const std::vector<StepRecord>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }

    double avg_accuracy() const { return steps_.empty() ? 0.0 : steps_.back().cum_accuracy; }
    double avg_loss() const { return steps_.empty() ? 0.0 : steps_.back().cum_loss; }

private:
    std::vector<StepRecord> steps_;
    std::size_t correct_ = 0;
    double loss_sum_ = 0.0;
};

}  // namespace auxnet
