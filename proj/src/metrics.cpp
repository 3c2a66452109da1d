#include "auxnet/metrics.hpp"

namespace auxnet {

void RunMetrics::record(std::size_t num_active_aux, std::size_t predicted, std::size_t actual,
                        double step_loss) {
    StepRecord rec;
    rec.t = steps_.size() + 1;
    rec.num_active_aux = num_active_aux;
    rec.predicted = predicted;
    rec.actual = actual;
    rec.step_loss = step_loss;
    if (predicted == actual) ++correct_;
    loss_sum_ += step_loss;
    const auto n = static_cast<double>(rec.t);
    rec.cum_accuracy = static_cast<double>(correct_) / n;
    rec.cum_loss = loss_sum_ / n;
    steps_.push_back(rec);
}

}  // namespace auxnet
