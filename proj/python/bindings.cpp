#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "auxnet/errors.hpp"
#include "auxnet/gradcheck.hpp"
#include "auxnet/harness.hpp"
#include "auxnet/model.hpp"
#include "auxnet/odl.hpp"
#include "auxnet/snapshot.hpp"

namespace py = pybind11;
using namespace auxnet;

namespace {

std::vector<double> to_vector(const py::iterable& xs) {
    std::vector<double> out;
    for (const auto& x : xs) out.push_back(x.cast<double>());
    return out;
}

}  // namespace

PYBIND11_MODULE(_auxnet, m) {
    m.doc() = "Online learning over haphazard auxiliary inputs";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<OptimizerKind>(m, "Optimizer")
        .value("ADAM", OptimizerKind::kAdam)
        .value("SGD", OptimizerKind::kSgd);

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init<>())
        .def_readwrite("base_layers", &NetworkConfig::base_layers)
        .def_readwrite("aux_layers", &NetworkConfig::aux_layers)
        .def_readwrite("end_layers", &NetworkConfig::end_layers)
        .def_readwrite("nodes", &NetworkConfig::nodes)
        .def_readwrite("num_classes", &NetworkConfig::num_classes)
        .def_readwrite("num_base_features", &NetworkConfig::num_base_features)
        .def_readwrite("eta", &NetworkConfig::eta)
        .def_readwrite("beta", &NetworkConfig::beta)
        .def_readwrite("lambda_", &NetworkConfig::lambda)
        .def_readwrite("seed", &NetworkConfig::seed)
        .def_readwrite("optimizer", &NetworkConfig::optimizer)
        .def_property_readonly("total_layers", &NetworkConfig::total_layers)
        .def("validate", &NetworkConfig::validate)
        .def("__eq__", [](const NetworkConfig& a, const NetworkConfig& b) { return a == b; });

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("name", &Dataset::name)
        .def_readonly("num_features", &Dataset::num_features)
        .def_readonly("num_classes", &Dataset::num_classes)
        .def_readonly("original_labels", &Dataset::original_labels)
        .def("__len__", &Dataset::size)
        .def("labels", [](const Dataset& ds) {
            std::vector<std::size_t> out;
            for (const auto& inst : ds.instances) out.push_back(inst.label);
            return out;
        })
        .def("features", [](const Dataset& ds, std::size_t i) { return ds.instances.at(i).features; });
    m.def("load_ucr", &load_ucr, py::arg("path"));

    py::class_<AvailabilitySchedule>(m, "AvailabilitySchedule")
        .def_readonly("num_aux", &AvailabilitySchedule::num_aux)
        .def_readonly("p", &AvailabilitySchedule::p)
        .def_readonly("seed", &AvailabilitySchedule::seed)
        .def_readonly("masks", &AvailabilitySchedule::masks)
        .def("available_at", &AvailabilitySchedule::available_at)
        .def("__len__", &AvailabilitySchedule::size)
        .def("__eq__", [](const AvailabilitySchedule& a, const AvailabilitySchedule& b) { return a == b; });
    m.def("make_schedule", &make_schedule, py::arg("length"), py::arg("num_aux"), py::arg("p"), py::arg("seed"));
    m.def("save_schedule", &save_schedule, py::arg("path"), py::arg("schedule"));
    m.def("load_schedule", &load_schedule, py::arg("path"));

    py::class_<StreamInstance>(m, "StreamInstance")
        .def(py::init([](py::iterable x_base, AuxValues x_aux, std::size_t label, std::size_t t) {
                 return StreamInstance{t, to_vector(x_base), std::move(x_aux), label};
             }),
             py::arg("x_base"), py::arg("x_aux") = AuxValues{}, py::arg("label") = 0, py::arg("t") = 0)
        .def_readwrite("t", &StreamInstance::t)
        .def_readwrite("x_base", &StreamInstance::x_base)
        .def_readwrite("x_aux", &StreamInstance::x_aux)
        .def_readwrite("label", &StreamInstance::label);
    m.def("split_stream", &split_stream, py::arg("dataset"), py::arg("num_base"), py::arg("schedule"));
    m.def("base_only_stream", &base_only_stream, py::arg("dataset"), py::arg("num_features"));

    py::class_<StepRecord>(m, "StepRecord")
        .def_readonly("t", &StepRecord::t)
        .def_readonly("num_active_aux", &StepRecord::num_active_aux)
        .def_readonly("predicted", &StepRecord::predicted)
        .def_readonly("actual", &StepRecord::actual)
        .def_readonly("step_loss", &StepRecord::step_loss)
        .def_readonly("cum_accuracy", &StepRecord::cum_accuracy)
        .def_readonly("cum_loss", &StepRecord::cum_loss);
    py::class_<RunMetrics>(m, "RunMetrics")
        .def_property_readonly("steps", &RunMetrics::steps)
        .def_property_readonly("avg_accuracy", &RunMetrics::avg_accuracy)
        .def_property_readonly("avg_loss", &RunMetrics::avg_loss)
        .def("__len__", &RunMetrics::size);

    py::class_<KnowledgeBase>(m, "KnowledgeBase")
        .def_readonly("config", &KnowledgeBase::config)
        .def_property_readonly("alphas",
                               [](const KnowledgeBase& kb) {
                                   std::vector<double> out;
                                   for (const auto& l : kb.layers) out.push_back(l.alpha);
                                   return out;
                               })
        .def("__eq__", [](const KnowledgeBase& a, const KnowledgeBase& b) { return a == b; });
    m.def("init_knowledge_base", &init_knowledge_base, py::arg("config"));
    m.def("save_snapshot", &save_snapshot, py::arg("path"), py::arg("knowledge"));
    m.def("load_snapshot", &load_snapshot, py::arg("path"));

    py::class_<StepOutcome>(m, "StepOutcome")
        .def_readonly("predicted", &StepOutcome::predicted)
        .def_readonly("loss", &StepOutcome::loss)
        .def_readonly("prediction", &StepOutcome::prediction);

    py::class_<AuxNet>(m, "AuxNet")
        .def(py::init<const NetworkConfig&>(), py::arg("config"))
        .def(py::init<KnowledgeBase>(), py::arg("knowledge"))
        .def("predict_proba",
             [](const AuxNet& net, py::iterable x_base, const AuxValues& x_aux) {
                 return net.predict_proba(to_vector(x_base), x_aux);
             },
             py::arg("x_base"), py::arg("x_aux") = AuxValues{})
        .def("learn_one", &AuxNet::learn_one, py::arg("instance"))
        .def_property_readonly("knowledge", &AuxNet::knowledge)
        .def_property_readonly("config", &AuxNet::config);

    py::class_<OdlNetwork>(m, "OdlNetwork")
        .def(py::init<const NetworkConfig&>(), py::arg("config"))
        .def("predict_proba", [](const OdlNetwork& net, py::iterable x) { return net.predict_proba(to_vector(x)); })
        .def("learn_one",
             [](OdlNetwork& net, py::iterable x, std::size_t label) { return net.learn_one(to_vector(x), label); },
             py::arg("x"), py::arg("label"));

    m.def(
        "run_stream",
        [](const NetworkConfig& cfg, const std::vector<StreamInstance>& stream) { return run_stream(cfg, stream); },
        py::arg("config"), py::arg("stream"));
    m.def(
        "run_odl", [](const NetworkConfig& cfg, const std::vector<StreamInstance>& stream) { return run_odl(cfg, stream); },
        py::arg("config"), py::arg("stream"));

    m.def(
        "gradcheck",
        [](std::uint64_t seed, std::size_t cases) {
            py::list out;
            for (const auto& c : run_gradcheck_suite(seed, cases)) {
                py::dict d;
                d["active_aux"] = c.active_aux;
                d["checked"] = c.report.checked;
                d["max_rel_error"] = c.report.max_rel_error;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 0, py::arg("cases") = 3);
}
