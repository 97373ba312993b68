#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "antsched/channel.hpp"
#include "antsched/core.hpp"
#include "antsched/error.hpp"
#include "antsched/experiment.hpp"
#include "antsched/hls.hpp"
#include "antsched/io.hpp"
#include "antsched/schedulers.hpp"
#include "brute_force.hpp"

namespace py = pybind11;
using namespace antsched;

namespace {

QualityLadder ladderFromSizes(const std::vector<double>& sizes) { return QualityLadder::fromSizes(sizes); }

std::string formatAssignment(const Assignment& a) {
    return "Assignment(slot=" + (a.slot ? std::to_string(*a.slot) : std::string("None")) +
           ", quality=" + std::to_string(a.quality) + ")";
}

}  // namespace

PYBIND11_MODULE(_antsched, m) {
    m.doc() = "Anticipatory video segment scheduling: schedulers, channel model, HLS rewriting";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ValueError);
    // ConfigError and DomainError derive from std::invalid_argument / std::domain_error -> ValueError

    // -- core --------------------------------------------------------------------------
    py::class_<QualityLevel>(m, "QualityLevel")
        .def(py::init([](double size, long long bandwidth, std::string label) {
                 return QualityLevel{size, bandwidth, std::move(label)};
             }),
             py::arg("size_mb"), py::arg("bandwidth"), py::arg("label"))
        .def_readonly("size_mb", &QualityLevel::sizeMB)
        .def_readonly("bandwidth", &QualityLevel::advertisedBandwidth)
        .def_readonly("label", &QualityLevel::variantLabel);

    py::class_<QualityLadder>(m, "QualityLadder")
        .def(py::init<std::vector<QualityLevel>>(), py::arg("levels"))
        .def_static("default", &QualityLadder::defaultLadder)
        .def_static("from_sizes", &ladderFromSizes, py::arg("sizes_mb"))
        .def_static("parse", &io::parseLadderSpec, py::arg("spec"))
        .def("__len__", &QualityLadder::size)
        .def("__getitem__", &QualityLadder::operator[], py::arg("index"))
        .def_property_readonly("sizes", [](const QualityLadder& l) {
            std::vector<double> out;
            for (const auto& level : l.levels()) out.push_back(level.sizeMB);
            return out;
        });

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<std::size_t, double, std::vector<std::vector<double>>>(), py::arg("num_segments"),
             py::arg("slot_seconds"), py::arg("capacity_mb"))
        .def_property_readonly("num_users", &Scenario::numUsers)
        .def_property_readonly("num_slots", &Scenario::numSlots)
        .def_property_readonly("num_segments", &Scenario::numSegments)
        .def_property_readonly("slot_seconds", &Scenario::slotSeconds)
        .def_property_readonly("capacity", &Scenario::capacityMatrix)
        .def("to_csv", &io::writeScenarioCsv)
        .def_static("from_csv", &io::readScenarioCsv, py::arg("text"), py::arg("num_segments") = py::none(),
                    py::arg("slot_seconds") = 10.0)
        .def(py::self == py::self);

    py::class_<Assignment>(m, "Assignment")
        .def(py::init<std::optional<std::size_t>, std::size_t>(), py::arg("slot"), py::arg("quality"))
        .def_readwrite("slot", &Assignment::slot)
        .def_readwrite("quality", &Assignment::quality)
        .def_property_readonly("deferred", &Assignment::deferred)
        .def("__repr__", &formatAssignment)
        .def(py::self == py::self);

    py::class_<Schedule>(m, "Schedule")
        .def(py::init([](std::size_t numSlots, const std::vector<std::vector<Assignment>>& users) {
                 Schedule s;
                 s.numSlots = numSlots;
                 for (const auto& u : users) s.users.push_back({u});
                 return s;
             }),
             py::arg("num_slots"), py::arg("users"))
        .def_readonly("num_slots", &Schedule::numSlots)
        .def_property_readonly("users",
                               [](const Schedule& s) {
                                   std::vector<std::vector<Assignment>> out;
                                   for (const auto& u : s.users) out.push_back(u.segments);
                                   return out;
                               })
        .def("to_csv", &io::writeScheduleCsv, py::arg("ladder"))
        .def_static("from_csv", &io::readScheduleCsv, py::arg("text"), py::arg("num_slots"))
        .def(py::self == py::self);

    py::class_<ObjectiveWeights>(m, "ObjectiveWeights")
        .def(py::init([](double l, double q, double b) {
                 ObjectiveWeights w{l, q, b};
                 w.validate();
                 return w;
             }),
             py::arg("lateness") = 440.0, py::arg("quality") = 10.0, py::arg("buffer") = 1.0)
        .def_readonly("lateness", &ObjectiveWeights::lateness)
        .def_readonly("quality", &ObjectiveWeights::quality)
        .def_readonly("buffer", &ObjectiveWeights::buffer);

    py::class_<UserMetrics>(m, "UserMetrics")
        .def_readonly("avg_quality_mb", &UserMetrics::avgQualityMB)
        .def_readonly("lateness_seconds", &UserMetrics::latenessSeconds)
        .def_readonly("avg_buffer_segments", &UserMetrics::avgBufferSegments)
        .def_readonly("late_segments", &UserMetrics::lateSegments)
        .def_readonly("deferred_segments", &UserMetrics::deferredSegments);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("avg_quality_mb", &MetricsReport::avgQualityMB)
        .def_readonly("avg_lateness_seconds", &MetricsReport::avgLatenessSeconds)
        .def_readonly("avg_buffer_segments", &MetricsReport::avgBufferSegments)
        .def_readonly("objective", &MetricsReport::objectiveValue)
        .def_readonly("users", &MetricsReport::users);

    m.def("lateness", &lateness, py::arg("download_slot"), py::arg("segment"));
    m.def("buffer_timeline", &bufferTimeline, py::arg("schedule"), py::arg("user") = 0);
    m.def("objective_value", &objectiveValue, py::arg("schedule"), py::arg("ladder"),
          py::arg("weights") = ObjectiveWeights{});
    m.def(
        "validate_schedule",
        [](const Schedule& s, const Scenario& sc, const QualityLadder& l) {
            std::vector<std::string> out;
            for (const auto& v : validateSchedule(s, sc, l).violations) out.push_back(v.describe());
            return out;
        },
        py::arg("schedule"), py::arg("scenario"), py::arg("ladder"),
        "List of violation descriptions; empty when the schedule is valid.");
    m.def("compute_metrics", &computeMetrics, py::arg("schedule"), py::arg("scenario"), py::arg("ladder"),
          py::arg("weights") = ObjectiveWeights{});

    // -- schedulers --------------------------------------------------------------------
    py::enum_<sched::SolveStatus>(m, "SolveStatus")
        .value("OPTIMAL", sched::SolveStatus::Optimal)
        .value("INFEASIBLE", sched::SolveStatus::Infeasible)
        .value("BUDGET_EXCEEDED", sched::SolveStatus::BudgetExceeded);

    py::class_<sched::SchedulerRun>(m, "SchedulerRun")
        .def_readonly("status", &sched::SchedulerRun::status)
        .def_readonly("schedule", &sched::SchedulerRun::schedule)
        .def_readonly("nodes", &sched::SchedulerRun::nodes);

    m.def(
        "schedule",
        [](const std::string& scheduler, const Scenario& sc, const QualityLadder& ladder,
           const ObjectiveWeights& weights, std::size_t maxBuffer, std::optional<std::size_t> maxNodes,
           std::optional<double> timeLimit) {
            const sched::GreedyConfig greedy{maxBuffer};
            const sched::SolverBudget budget{maxNodes, timeLimit};
            py::gil_scoped_release release;
            return sched::runScheduler(sched::parseSchedulerKind(scheduler), sc, ladder, weights, greedy, budget);
        },
        py::arg("scheduler"), py::arg("scenario"), py::arg("ladder"), py::arg("weights") = ObjectiveWeights{},
        py::arg("max_buffer") = 3, py::arg("max_nodes") = py::none(), py::arg("time_limit") = py::none(),
        "Run bufferFirst, qualityFirst, fill or exact.");
    m.def("get_best_quality", &sched::getBestQuality, py::arg("ladder"), py::arg("capacity_mb"));
    m.def(
        "get_best_quality_range",
        [](const QualityLadder& l, std::size_t n, const std::vector<double>& caps) {
            return sched::getBestQualityRange(l, n, caps);
        },
        py::arg("ladder"), py::arg("n"), py::arg("caps_mb"));
    m.def("get_segments_for_quality", &sched::getSegmentsForQuality, py::arg("size_mb"), py::arg("capacity_mb"));

    // -- channel model -----------------------------------------------------------------
    m.def("path_loss_db", &channel::pathLossDb, py::arg("distance_km"), py::arg("shadowing_db") = 0.0);
    m.def(
        "shannon_rate_mbps", [](double pl) { return channel::shannonRateMbps(channel::RadioParams{}, pl); },
        py::arg("path_loss_db"), "Rate under the default radio parameters.");
    m.def(
        "allocate_proportional_fair",
        [](const std::vector<double>& rates, double cap) { return channel::allocateProportionalFair(rates, cap); },
        py::arg("phy_rates_mbps"), py::arg("cell_cap_mbps"));
    m.def(
        "build_scenario",
        [](const std::string& configText) {
            const auto kv = io::KeyValueConfig::parse(configText);
            auto known = io::scenarioConfigKeys();
            for (auto k : io::radioParamKeys()) known.push_back(k);
            kv.requireKnownKeys(known);
            channel::ScenarioConfig sc;
            channel::RadioParams rp;
            io::applyScenarioConfig(kv, sc);
            io::applyRadioParams(kv, rp);
            return channel::buildScenario(sc, rp).scenario;
        },
        py::arg("config") = "", "Scenario from key=value text (ScenarioConfig and RadioParams field names).");

    // -- HLS ---------------------------------------------------------------------------
    m.def(
        "canonical_media_playlist", [](const std::string& t) { return hls::emitMediaPlaylist(hls::parseMediaPlaylist(t)); },
        py::arg("text"));
    m.def(
        "canonical_master_playlist",
        [](const std::string& t) { return hls::emitMasterPlaylist(hls::parseMasterPlaylist(t)); }, py::arg("text"));
    m.def(
        "playlist_buffer_size",
        [](const std::string& t) { return hls::parseMediaPlaylist(t).bufferSize; }, py::arg("text"));
    m.def("buffer_size_for_slot", &hls::bufferSizeForSlot, py::arg("schedule"), py::arg("user"), py::arg("slot"));
    m.def(
        "join_playlists",
        [](const std::string& masterText, const std::vector<std::string>& variantTexts, const Schedule& schedule,
           std::size_t user, std::size_t slot, int refresh) {
            const auto master = hls::parseMasterPlaylist(masterText);
            if (variantTexts.size() != master.variants.size())
                throw ConsistencyError("one variant playlist per master entry is required");
            std::map<std::string, hls::MediaPlaylist> variants;
            for (std::size_t i = 0; i < variantTexts.size(); ++i)
                variants.emplace(master.variants[i].uri, hls::parseMediaPlaylist(variantTexts[i]));
            return hls::emitMediaPlaylist(hls::joinPlaylists(master, variants, schedule, user, slot, refresh));
        },
        py::arg("master"), py::arg("variants"), py::arg("schedule"), py::arg("user"), py::arg("slot"),
        py::arg("refresh") = 10, "Joined playlist text; variants are given in master order, slot is 0-based.");

    // -- experiments -------------------------------------------------------------------
    m.def(
        "run_experiment",
        [](const std::string& configText) {
            const auto config = experiment::parseExperimentConfig(configText);
            experiment::ResultTable table;
            {
                py::gil_scoped_release release;
                table = experiment::runExperiment(config);
            }
            const auto plots = experiment::emitPlotData(table, config.ladder);
            py::dict out;
            out["results"] = experiment::writeResultsCsv(table);
            out["quality"] = plots.quality;
            out["lateness"] = plots.lateness;
            out["buffer"] = plots.buffer;
            out["notes"] = plots.notes;
            return out;
        },
        py::arg("config") = "", "Run a sweep from key=value text; returns the CSV files as strings.");
    m.def(
        "confidence_interval",
        [](const std::vector<double>& samples, double level) {
            const auto ci = experiment::confidenceInterval(samples, level);
            return py::make_tuple(ci.mean, ci.halfWidth);
        },
        py::arg("samples"), py::arg("level") = 0.95);
    m.def(
        "oracle_check",
        [](std::size_t maxSlots, std::size_t instances, std::uint64_t seed) {
            const auto r = oracle::runOracleCheck(maxSlots, instances, seed);
            py::dict out;
            out["instances"] = r.instances;
            out["feasible"] = r.feasible;
            out["mismatches"] = r.mismatches;
            out["seconds"] = r.seconds;
            return out;
        },
        py::arg("max_slots") = 5, py::arg("instances") = 100, py::arg("seed") = 1);
}
