#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "advens/attacks.hpp"
#include "advens/common.hpp"
#include "advens/data.hpp"
#include "advens/ensemble.hpp"
#include "advens/harness.hpp"
#include "advens/hpo.hpp"
#include "advens/report.hpp"

namespace py = pybind11;
using namespace advens;

namespace {

py::object json_to_py(const json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

json py_to_json(const py::object& obj) {
    py::module_ pyjson = py::module_::import("json");
    std::string text = py::cast<std::string>(pyjson.attr("dumps")(obj));
    return json::parse(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Unexpected-ensemble adversarial defense toolkit";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<ExperimentError>(m, "ExperimentError");

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("n", &SynthSpec::n)
        .def_readwrite("n_numeric", &SynthSpec::n_numeric)
        .def_readwrite("n_categorical", &SynthSpec::n_categorical)
        .def_readwrite("imbalance", &SynthSpec::imbalance)
        .def_readwrite("noise", &SynthSpec::noise)
        .def_readwrite("separation", &SynthSpec::separation)
        .def_readwrite("vocab", &SynthSpec::vocab)
        .def_readwrite("xor_pairs", &SynthSpec::xor_pairs)
        .def("validate", &SynthSpec::validate);

    py::class_<FittedTransform>(m, "FittedTransform")
        .def_property_readonly("onehot_groups", &FittedTransform::onehot_groups)
        .def_property_readonly("column_names", [](const FittedTransform& t) {
            std::vector<std::string> names;
            for (const auto& col : t.layout) names.push_back(col.name);
            return names;
        });

    py::class_<DataSplit>(m, "DataSplit")
        .def_readonly("train_x", &DataSplit::train_x)
        .def_readonly("train_y", &DataSplit::train_y)
        .def_readonly("val_x", &DataSplit::val_x)
        .def_readonly("val_y", &DataSplit::val_y)
        .def_readonly("test_x", &DataSplit::test_x)
        .def_readonly("test_y", &DataSplit::test_y)
        .def_readonly("transform", &DataSplit::transform)
        .def("save", &DataSplit::save, py::arg("dir"))
        .def_static("load", &DataSplit::load, py::arg("dir"));

    m.def(
        "synth_split",
        [](const SynthSpec& spec, std::uint64_t seed) {
            return prepare_split(gen_synth(spec, seed), seed);
        },
        py::arg("spec"), py::arg("seed"),
        "generate a synthetic table and partition + encode it");
    m.def(
        "csv_split",
        [](const std::string& csv_path, const std::string& schema_path, std::uint64_t seed,
           double sample_rate) {
            FeatureSchema schema = FeatureSchema::load(schema_path);
            RawTable table = load_csv(csv_path, schema);
            if (sample_rate < 1.0) table = stratified_sample(table, sample_rate, seed);
            return prepare_split(table, seed);
        },
        py::arg("csv_path"), py::arg("schema_path"), py::arg("seed"),
        py::arg("sample_rate") = 1.0, "load a schema'd CSV and partition + encode it");

    py::class_<HyperParams>(m, "HyperParams")
        .def(py::init<>())
        .def("to_dict", [](const HyperParams& p) { return json_to_py(p.to_json()); })
        .def_static("from_dict",
                    [](const py::object& obj) { return HyperParams::from_json(py_to_json(obj)); });

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("val_accuracy", &TrainedModel::val_accuracy)
        .def_property_readonly("params",
                               [](const TrainedModel& model) { return json_to_py(model.params.to_json()); })
        .def("accuracy",
             [](const TrainedModel& model, const Matrix& x, const IntVector& y) {
                 return model.net.accuracy(x, y);
             })
        .def("predict_probs",
             [](const TrainedModel& model, const Matrix& x) { return model.net.predict_probs(x); })
        .def("save", &TrainedModel::save, py::arg("path"))
        .def_static("load", &TrainedModel::load, py::arg("path"));

    py::class_<Trial>(m, "Trial")
        .def_readonly("index", &Trial::index)
        .def_readonly("val_accuracy", &Trial::val_accuracy)
        .def_readonly("diverged", &Trial::diverged)
        .def_readonly("model", &Trial::model)
        .def_property_readonly("params",
                               [](const Trial& t) { return json_to_py(t.params.to_json()); });

    py::class_<ModelPool>(m, "ModelPool")
        .def_readonly("trials", &ModelPool::trials)
        .def("__len__", [](const ModelPool& pool) { return pool.trials.size(); })
        .def_property_readonly("victim", &ModelPool::victim,
                               py::return_value_policy::reference_internal)
        .def("save", &ModelPool::save, py::arg("dir"))
        .def_static("load", &ModelPool::load, py::arg("dir"));

    m.def(
        "run_hpo",
        [](const DataSplit& split, int budget, std::uint64_t seed) {
            return run_hpo(table1_space(), split, budget, seed);
        },
        py::arg("split"), py::arg("budget"), py::arg("seed"),
        "TPE-tune a pool of classifiers over the published search space");
    m.def("reverse_engineering_bound", &reverse_engineering_bound, py::arg("val_accuracies"));
    m.def(
        "gower_distance",
        [](const HyperParams& a, const HyperParams& b) { return gower_distance(a, b); },
        py::arg("a"), py::arg("b"));

    py::class_<SelectionCriteria>(m, "SelectionCriteria")
        .def(py::init<>())
        .def_readwrite("perf_epsilon", &SelectionCriteria::perf_epsilon)
        .def_readwrite("distance_t", &SelectionCriteria::distance_t)
        .def_readwrite("k", &SelectionCriteria::k);

    py::class_<DEParams>(m, "DEParams")
        .def(py::init<>())
        .def_readwrite("np", &DEParams::np)
        .def_readwrite("cf", &DEParams::cf)
        .def_readwrite("f", &DEParams::f)
        .def_readwrite("lives", &DEParams::lives);

    py::class_<WeightedEnsemble>(m, "WeightedEnsemble")
        .def_property_readonly("weights", &WeightedEnsemble::weights)
        .def_property_readonly("member_trials",
                               [](const WeightedEnsemble& e) {
                                   std::vector<int> idx;
                                   for (const auto& member : e.members)
                                       idx.push_back(member.pool_index);
                                   return idx;
                               })
        .def("accuracy",
             [](const WeightedEnsemble& e, const Matrix& x, const IntVector& y) {
                 return e.accuracy(x, y);
             })
        .def("predict_probs", &WeightedEnsemble::predict_probs)
        .def("save", &WeightedEnsemble::save, py::arg("path"))
        .def_static("load", &WeightedEnsemble::load, py::arg("path"));

    m.def(
        "select_unexpected",
        [](const ModelPool& pool, const SelectionCriteria& criteria) {
            std::vector<int> idx;
            for (const Trial* trial : select_unexpected(pool, criteria))
                idx.push_back(trial->index);
            return idx;
        },
        py::arg("pool"), py::arg("criteria"), "trial indices passing the unexpectedness filter");
    m.def(
        "build_defense",
        [](const ModelPool& pool, const SelectionCriteria& criteria, const DEParams& de,
           const Matrix& x, const IntVector& y, std::uint64_t seed) {
            return build_defense(pool, criteria, de, x, y, seed);
        },
        py::arg("pool"), py::arg("criteria"), py::arg("de"), py::arg("x"), py::arg("y"),
        py::arg("seed"), "unexpected-model selection plus DE ensemble weighting");

    py::class_<AttackSpec>(m, "AttackSpec")
        .def(py::init([](const std::string& kind) {
                 return AttackSpec::defaults(attack_from_string(kind));
             }),
             py::arg("kind"))
        .def_property(
            "kind", [](const AttackSpec& spec) { return to_string(spec.kind); },
            [](AttackSpec& spec, const std::string& kind) { spec.kind = attack_from_string(kind); })
        .def_readwrite("epsilon", &AttackSpec::epsilon)
        .def_readwrite("clip_min", &AttackSpec::clip_min)
        .def_readwrite("clip_max", &AttackSpec::clip_max)
        .def_readwrite("iterations", &AttackSpec::iterations)
        .def_readwrite("theta", &AttackSpec::theta)
        .def_readwrite("gamma", &AttackSpec::gamma)
        .def_readwrite("cw_c", &AttackSpec::cw_c)
        .def_readwrite("cw_lr", &AttackSpec::cw_lr)
        .def_readwrite("cw_kappa", &AttackSpec::cw_kappa)
        .def_readwrite("overshoot", &AttackSpec::overshoot);

    py::class_<AdversarialSet>(m, "AdversarialSet")
        .def_readonly("x_adv", &AdversarialSet::x_adv)
        .def_readonly("y", &AdversarialSet::y)
        .def_readonly("linf", &AdversarialSet::linf)
        .def_readonly("l2", &AdversarialSet::l2)
        .def_readonly("l0", &AdversarialSet::l0)
        .def_readonly("flags", &AdversarialSet::flags)
        .def("save", &AdversarialSet::save, py::arg("dir"))
        .def_static("load", &AdversarialSet::load, py::arg("dir"));

    m.def(
        "craft_attack",
        [](const TrainedModel& victim, const Matrix& x, const IntVector& y, const AttackSpec& spec,
           const std::vector<int>& onehot_groups, std::uint64_t seed) {
            return craft_attack(victim.net, x, y, spec, onehot_groups, seed, "model");
        },
        py::arg("victim"), py::arg("x"), py::arg("y"), py::arg("spec"),
        py::arg("onehot_groups") = std::vector<int>{}, py::arg("seed") = 0);
    m.def(
        "craft_attack",
        [](const WeightedEnsemble& victim, const Matrix& x, const IntVector& y,
           const AttackSpec& spec, const std::vector<int>& onehot_groups, std::uint64_t seed) {
            return craft_attack(victim, x, y, spec, onehot_groups, seed, "ensemble");
        },
        py::arg("victim"), py::arg("x"), py::arg("y"), py::arg("spec"),
        py::arg("onehot_groups") = std::vector<int>{}, py::arg("seed") = 0);

    m.def(
        "run_treatments",
        [](const py::object& source, const py::object& config,
           const std::vector<std::uint64_t>& seeds) {
            TreatmentReport report = run_treatments(DatasetSource::from_json(py_to_json(source)),
                                                    HarnessConfig::from_json(py_to_json(config)),
                                                    seeds);
            return json_to_py(report.to_json());
        },
        py::arg("source"), py::arg("config"), py::arg("seeds"),
        "six-treatment protocol; source/config are dicts, returns the report as a dict");
    m.def(
        "sweep_distance",
        [](const py::object& source, const py::object& config, const std::vector<double>& distances,
           const std::vector<std::uint64_t>& seeds) {
            SweepReport report = sweep_distance(DatasetSource::from_json(py_to_json(source)),
                                                HarnessConfig::from_json(py_to_json(config)),
                                                distances, seeds);
            return json_to_py(report.to_json());
        },
        py::arg("source"), py::arg("config"), py::arg("distances"), py::arg("seeds"));
    m.def("expand_seeds", &expand_seeds, py::arg("base"), py::arg("repeats"));
    m.def("default_distance_grid", [] { return default_distance_grid(); });
}
