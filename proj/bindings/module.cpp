#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acquisim/cli.hpp"
#include "acquisim/config.hpp"
#include "acquisim/cross_validation.hpp"
#include "acquisim/dataset.hpp"
#include "acquisim/errors.hpp"
#include "acquisim/forest.hpp"
#include "acquisim/io.hpp"
#include "acquisim/logistic.hpp"
#include "acquisim/metrics.hpp"
#include "acquisim/pca.hpp"
#include "acquisim/rng.hpp"
#include "acquisim/simulation.hpp"
#include "acquisim/strategies.hpp"

namespace py = pybind11;

namespace {

using namespace acquisim;

std::uint64_t derive_seed_path(std::uint64_t base,
                               const std::vector<std::uint64_t>& path) {
  std::uint64_t s = base;
  for (std::uint64_t p : path) s = derive_seed(s, {p});
  return s;
}

}  // namespace

PYBIND11_MODULE(_acquisim, m) {
  m.doc() = "Simulation harness for adaptive label-acquisition strategies";

  py::register_exception<Error>(m, "AcquisimError");

  py::class_<GroupId>(m, "GroupId")
      .def_readonly("label", &GroupId::label)
      .def_readonly("index", &GroupId::index)
      .def("__repr__", [](const GroupId& g) {
        return "GroupId(" + std::to_string(g.index) + ", '" + g.label + "')";
      });

  py::class_<Point>(m, "Point")
      .def_readonly("id", &Point::id)
      .def_readonly("group", &Point::group)
      .def_readonly("features", &Point::features)
      .def_readonly("consumption", &Point::consumption);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("points", &Dataset::points)
      .def_readonly("dimensionality", &Dataset::dimensionality)
      .def_readonly("groups", &Dataset::groups)
      .def("__len__", &Dataset::size)
      .def("ids", [](const Dataset& d) {
        std::vector<std::int64_t> ids(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) ids[i] = d.points[i].id;
        return ids;
      });

  py::class_<SplitSpec>(m, "SplitSpec")
      .def_readonly("pool_ids", &SplitSpec::pool_ids)
      .def_readonly("holdout_ids", &SplitSpec::holdout_ids)
      .def_readonly("seed", &SplitSpec::seed);

  py::class_<ForestHyperparams>(m, "ForestHyperparams")
      .def(py::init<>())
      .def_readwrite("num_trees", &ForestHyperparams::num_trees)
      .def_readwrite("max_depth", &ForestHyperparams::max_depth)
      .def_readwrite("min_leaf", &ForestHyperparams::min_leaf)
      .def_readwrite("min_train_size", &ForestHyperparams::min_train_size);

  py::class_<LogisticConfig>(m, "LogisticConfig")
      .def(py::init<>())
      .def_readwrite("l2", &LogisticConfig::l2)
      .def_readwrite("step", &LogisticConfig::step)
      .def_readwrite("max_iters", &LogisticConfig::max_iters)
      .def_readwrite("grad_tol", &LogisticConfig::grad_tol);

  py::class_<ScheduleParams>(m, "ScheduleParams")
      .def(py::init<>())
      .def_readwrite("num_points", &ScheduleParams::num_points)
      .def_readwrite("min_size", &ScheduleParams::min_size);

  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def(py::init<>())
      .def_property(
          "strategy",
          [](const SimulationConfig& c) { return strategy_name(c.strategy); },
          [](SimulationConfig& c, const std::string& name) {
            c.strategy = strategy_from_string(name);
          })
      .def_readwrite("repetitions", &SimulationConfig::repetitions)
      .def_readwrite("schedule", &SimulationConfig::schedule)
      .def_readwrite("forest", &SimulationConfig::forest)
      .def_readwrite("logistic", &SimulationConfig::logistic)
      .def_property(
          "threshold",
          [](const SimulationConfig& c) { return c.threshold.value; },
          [](SimulationConfig& c, double v) { c.threshold.value = v; })
      .def_readwrite("split_fraction", &SimulationConfig::split_fraction)
      .def_readwrite("seed", &SimulationConfig::seed)
      .def_readwrite("resplit_per_rep", &SimulationConfig::resplit_per_rep)
      .def_readwrite("pca_k", &SimulationConfig::pca_k)
      .def_readwrite("cv_grid", &SimulationConfig::cv_grid)
      .def_readwrite("cv_folds", &SimulationConfig::cv_folds);

  py::class_<ConfusionCounts>(m, "ConfusionCounts")
      .def_readonly("tp", &ConfusionCounts::tp)
      .def_readonly("tn", &ConfusionCounts::tn)
      .def_readonly("fp", &ConfusionCounts::fp)
      .def_readonly("fn", &ConfusionCounts::fn)
      .def("total", &ConfusionCounts::total);

  py::class_<GroupEntry>(m, "GroupEntry")
      .def_readonly("group", &GroupEntry::group)
      .def_readonly("label", &GroupEntry::label)
      .def_readonly("n", &GroupEntry::n)
      .def_readonly("counts", &GroupEntry::counts)
      .def_readonly("accuracy", &GroupEntry::accuracy)
      .def_readonly("mse", &GroupEntry::mse)
      .def_readonly("dp", &GroupEntry::dp);

  py::class_<GroupMetrics>(m, "GroupMetrics")
      .def_readonly("entries", &GroupMetrics::entries)
      .def_readonly("missing_groups", &GroupMetrics::missing_groups);

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_readonly("spearman", &MetricsRecord::spearman)
      .def_readonly("mse", &MetricsRecord::mse)
      .def_readonly("auroc", &MetricsRecord::auroc)
      .def_readonly("accuracy", &MetricsRecord::accuracy)
      .def_readonly("precision", &MetricsRecord::precision)
      .def_readonly("recall", &MetricsRecord::recall)
      .def_readonly("min_group_accuracy", &MetricsRecord::min_group_accuracy)
      .def_readonly("max_group_mse", &MetricsRecord::max_group_mse)
      .def_readonly("add", &MetricsRecord::add)
      .def_readonly("groups", &MetricsRecord::groups)
      .def("as_dict", [](const MetricsRecord& r) {
        py::dict out;
        for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
          out[kMetricNames[i]] = panel_metric(r, i);
        }
        return out;
      });

  py::class_<RunRecord>(m, "RunRecord")
      .def_property_readonly(
          "strategy",
          [](const RunRecord& r) { return strategy_name(r.strategy); })
      .def_readonly("repetition", &RunRecord::repetition)
      .def_readonly("budget", &RunRecord::budget)
      .def_readonly("metrics", &RunRecord::metrics)
      .def_readonly("digest", &RunRecord::digest);

  py::class_<MetricCi>(m, "MetricCi")
      .def_readonly("mean", &MetricCi::mean)
      .def_readonly("ci_low", &MetricCi::ci_low)
      .def_readonly("ci_high", &MetricCi::ci_high)
      .def_readonly("n_missing", &MetricCi::n_missing);

  py::class_<AggregateRecord>(m, "AggregateRecord")
      .def_property_readonly(
          "strategy",
          [](const AggregateRecord& a) { return strategy_name(a.strategy); })
      .def_readonly("budget", &AggregateRecord::budget)
      .def("metric", [](const AggregateRecord& a, const std::string& name) {
        for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
          if (name == kMetricNames[i]) return a.metrics[i];
        }
        throw ConfigError("unknown metric '" + name + "'");
      });

  py::class_<ForestModel>(m, "ForestModel")
      .def_readonly("trained_on", &ForestModel::trained_on)
      .def_readonly("dimensionality", &ForestModel::dimensionality)
      .def_readonly("seed", &ForestModel::seed)
      .def_property_readonly("num_trees", [](const ForestModel& f) {
        return f.trees.size();
      });

  py::class_<LogisticModel>(m, "LogisticModel")
      .def_readonly("kept", &LogisticModel::kept)
      .def_readonly("means", &LogisticModel::means)
      .def_readonly("scales", &LogisticModel::scales)
      .def_readonly("weights", &LogisticModel::weights)
      .def_readonly("bias", &LogisticModel::bias)
      .def_readonly("iterations", &LogisticModel::iterations)
      .def_readonly("final_loss", &LogisticModel::final_loss)
      .def("predict_proba", &LogisticModel::predict_proba);

  py::class_<PcaTransform>(m, "PcaTransform")
      .def_readonly("components", &PcaTransform::components)
      .def_readonly("means", &PcaTransform::means)
      .def_readonly("explained_variance", &PcaTransform::explained_variance)
      .def_readonly("k", &PcaTransform::k)
      .def_readonly("dimensionality", &PcaTransform::dimensionality);

  py::class_<WeightVector>(m, "WeightVector")
      .def_readonly("ids", &WeightVector::ids)
      .def_readonly("weights", &WeightVector::weights);

  py::class_<BootstrapCi>(m, "BootstrapCi")
      .def_readonly("mean", &BootstrapCi::mean)
      .def_readonly("ci_low", &BootstrapCi::ci_low)
      .def_readonly("ci_high", &BootstrapCi::ci_high);

  m.attr("STRATEGIES") =
      std::vector<std::string>{"uniform", "qbc",  "margin",
                               "accuracy", "mse", "disparity"};
  m.attr("METRIC_NAMES") = std::vector<std::string>(kMetricNames.begin(),
                                                    kMetricNames.end());

  m.def("derive_seed", &derive_seed_path, py::arg("base"), py::arg("path"),
        "Child stream seed for an ordered index path");

  m.def("generate_synthetic", &generate_synthetic, py::arg("n"), py::arg("d"),
        py::arg("n_groups"), py::arg("noise_sd"), py::arg("seed"));
  m.def("load_csv", &load_csv, py::arg("path"));
  m.def("write_csv", &write_csv, py::arg("dataset"), py::arg("path"));
  m.def("validate_dataset", &validate_dataset, py::arg("dataset"));
  m.def("split", &split, py::arg("dataset"), py::arg("fraction"),
        py::arg("seed"));

  m.def(
      "make_log_schedule",
      [](std::size_t pool, std::size_t num, std::size_t min_size) {
        return make_log_schedule(pool, num, min_size).sizes;
      },
      py::arg("pool_size"), py::arg("num_points"), py::arg("min_size") = 50);
  m.def("id_digest", &id_digest, py::arg("ids"));

  m.def(
      "fit_forest",
      [](const Dataset& d, const std::vector<std::int64_t>& ids,
         const ForestHyperparams& hp, std::uint64_t seed) {
        return fit_forest(select_points(d, ids), hp, seed);
      },
      py::arg("dataset"), py::arg("ids"),
      py::arg("hyperparams") = ForestHyperparams{}, py::arg("seed") = 0);
  m.def(
      "predict_forest",
      [](const ForestModel& f, const std::vector<std::vector<double>>& rows) {
        return predict_forest(f, rows);
      },
      py::arg("model"), py::arg("rows"));
  m.def(
      "per_tree_predictions",
      [](const ForestModel& f, const std::vector<std::vector<double>>& rows) {
        return per_tree_predictions(f, rows);
      },
      py::arg("model"), py::arg("rows"));

  m.def(
      "fit_logistic",
      [](const Dataset& d, const std::vector<std::int64_t>& ids,
         double threshold, const LogisticConfig& config) {
        return fit_logistic(select_points(d, ids), PovertyThreshold{threshold},
                            config);
      },
      py::arg("dataset"), py::arg("ids"), py::arg("threshold") = 1.90,
      py::arg("config") = LogisticConfig{});
  m.def(
      "predict_proba",
      [](const LogisticModel& model, const std::vector<std::vector<double>>& rows) {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const std::vector<double>& row : rows) {
          out.push_back(model.predict_proba(row));
        }
        return out;
      },
      py::arg("model"), py::arg("rows"));

  m.def(
      "fit_pca",
      [](const Dataset& d, const std::vector<std::int64_t>& ids,
         std::size_t k) { return fit_pca(select_points(d, ids), k); },
      py::arg("dataset"), py::arg("ids"), py::arg("k"));
  m.def(
      "transform_pca",
      [](const PcaTransform& t, const std::vector<std::vector<double>>& rows) {
        return transform_pca(t, rows);
      },
      py::arg("transform"), py::arg("rows"));

  m.def(
      "cross_validate_depth",
      [](const Dataset& d, const std::vector<std::int64_t>& ids,
         const ForestHyperparams& hp, const std::vector<int>& grid,
         std::size_t folds, std::uint64_t seed) {
        return cross_validate_depth(select_points(d, ids), hp, grid, folds,
                                    seed);
      },
      py::arg("dataset"), py::arg("ids"),
      py::arg("hyperparams") = ForestHyperparams{}, py::arg("grid"),
      py::arg("folds") = 3, py::arg("seed") = 0);

  m.def("spearman_rho", &spearman_rho, py::arg("truth"), py::arg("preds"));
  m.def("mse", &mse, py::arg("truth"), py::arg("preds"));
  m.def("auroc", &auroc, py::arg("labels"), py::arg("scores"));
  m.def(
      "evaluate_panel",
      [](const Dataset& d, const std::vector<std::int64_t>& holdout_ids,
         const std::vector<double>& preds_log, double threshold) {
        return evaluate_panel(select_points(d, holdout_ids), preds_log,
                              PovertyThreshold{threshold}, d.groups);
      },
      py::arg("dataset"), py::arg("holdout_ids"), py::arg("preds_log"),
      py::arg("threshold") = 1.90);

  m.def("uniform_weights", &uniform_weights, py::arg("pool_ids"));
  m.def(
      "qbc_weights",
      [](const ForestModel& f, const Dataset& d,
         const std::vector<std::int64_t>& ids) {
        return qbc_weights(f, select_points(d, ids));
      },
      py::arg("forest"), py::arg("dataset"), py::arg("pool_ids"));
  m.def(
      "margin_weights",
      [](const LogisticModel& c, const Dataset& d,
         const std::vector<std::int64_t>& ids) {
        return margin_weights(c, select_points(d, ids));
      },
      py::arg("classifier"), py::arg("dataset"), py::arg("pool_ids"));
  m.def(
      "group_weights",
      [](const std::string& kind, const GroupMetrics& gm, const Dataset& d,
         const std::vector<std::int64_t>& ids) {
        return group_weights(strategy_from_string(kind), gm,
                             select_points(d, ids));
      },
      py::arg("kind"), py::arg("group_metrics"), py::arg("dataset"),
      py::arg("pool_ids"));
  m.def(
      "weighted_sample_without_replacement",
      [](const WeightVector& wv, std::size_t k, std::uint64_t seed) {
        Rng rng(seed);
        return weighted_sample_without_replacement(wv, k, rng);
      },
      py::arg("weights"), py::arg("k"), py::arg("seed"));

  m.def("run_single_simulation",
        [](const Dataset& d, const SplitSpec& s, const SimulationConfig& c,
           std::size_t rep) { return run_single_simulation(d, s, c, rep); },
        py::arg("dataset"), py::arg("split"), py::arg("config"),
        py::arg("rep_index") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_experiment",
        [](const Dataset& d, const SimulationConfig& c, std::size_t jobs) {
          return run_experiment(d, c, jobs);
        },
        py::arg("dataset"), py::arg("config"), py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("bootstrap_ci", &bootstrap_ci, py::arg("values"), py::arg("b"),
        py::arg("level") = 0.95, py::arg("seed") = 0);
  m.def("aggregate", &aggregate, py::arg("records"), py::arg("b") = 1000,
        py::arg("seed") = 0);

  m.def("write_runs_csv", &write_runs_csv, py::arg("records"), py::arg("path"));
  m.def("read_runs_csv", &read_runs_csv, py::arg("path"));
  m.def("write_groups_csv", &write_groups_csv, py::arg("records"),
        py::arg("path"));
  m.def("attach_groups_csv", &attach_groups_csv, py::arg("records"),
        py::arg("path"));
  m.def("write_aggregates_csv", &write_aggregates_csv, py::arg("aggregates"),
        py::arg("path"));
  m.def("format_digest", &format_digest, py::arg("digest"));
}
