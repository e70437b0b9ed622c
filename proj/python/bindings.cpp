#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gcp/counting.hpp"
#include "gcp/packets.hpp"
#include "gcp/scenario.hpp"
#include "gcp/simulate.hpp"
#include "gcp/splitting.hpp"
#include "gcp/superpose.hpp"
#include "gcp/thinning.hpp"
#include "gcp/verify.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Generalized counting processes: exact laws, merging, splitting, simulation";

    py::class_<gcp::RateVector>(m, "RateVector")
        .def(py::init<std::vector<double>>(), py::arg("rates"))
        .def_static("parse", &gcp::RateVector::parse)
        .def_property_readonly("k", &gcp::RateVector::k)
        .def_property_readonly("total", &gcp::RateVector::total)
        .def_property_readonly("rates", [](const gcp::RateVector& r) {
            return std::vector<double>(r.rates().begin(), r.rates().end());
        })
        .def("rate", &gcp::RateVector::rate, py::arg("j"))
        .def("__eq__", [](const gcp::RateVector& a, const gcp::RateVector& b) { return a == b; })
        .def("__repr__", [](const gcp::RateVector& r) { return "RateVector([" + r.to_string() + "])"; });
    py::implicitly_convertible<py::list, gcp::RateVector>();
    py::implicitly_convertible<py::tuple, gcp::RateVector>();

    m.def("enumerate_partitions", &gcp::enumerate_partitions, py::arg("k"), py::arg("n"));
    m.def("pmf_enumerated", &gcp::pmf_enumerated, py::arg("rates"), py::arg("n"), py::arg("t"));
    m.def("pmf_recurrence", &gcp::pmf_recurrence, py::arg("rates"), py::arg("n_max"), py::arg("t"));
    m.def("pgf", &gcp::pgf, py::arg("rates"), py::arg("u"), py::arg("t"));
    m.def("mean", &gcp::mean, py::arg("rates"), py::arg("t"));
    m.def("variance", &gcp::variance, py::arg("rates"), py::arg("t"));
    m.def("truncation_point", &gcp::truncation_point, py::arg("rates"), py::arg("t"), py::arg("eps"));

    py::class_<gcp::MergeFamily>(m, "MergeFamily")
        .def(py::init<std::vector<gcp::RateVector>>(), py::arg("components"))
        .def(py::init([](const std::vector<std::vector<double>>& components) {
                 std::vector<gcp::RateVector> rv;
                 for (const auto& c : components) rv.emplace_back(c);
                 return gcp::MergeFamily(std::move(rv));
             }),
             py::arg("components"))
        .def_property_readonly("k_max", &gcp::MergeFamily::k_max)
        .def("__len__", &gcp::MergeFamily::size);
    m.def("merge", &gcp::merge, py::arg("family"));
    m.def("merged_pmf_check", &gcp::merged_pmf_check, py::arg("family"), py::arg("n"), py::arg("t"));
    m.def("origin_probability", &gcp::origin_probability, py::arg("family"), py::arg("source"), py::arg("j"));

    py::class_<gcp::SplitSpec>(m, "SplitSpec")
        .def(py::init<std::vector<double>>(), py::arg("p"))
        .def_property_readonly("q", &gcp::SplitSpec::q)
        .def_property_readonly("p", &gcp::SplitSpec::probabilities);
    m.def("type1_component_rates", &gcp::type1_component_rates, py::arg("rates"), py::arg("spec"), py::arg("i"));
    m.def("type2_component_rates", &gcp::type2_component_rates, py::arg("rates"), py::arg("spec"), py::arg("i"),
          py::arg("units"));
    m.def("type2_component_rate_vector", &gcp::type2_component_rate_vector, py::arg("rates"), py::arg("spec"),
          py::arg("i"));
    m.def(
        "type2_joint_pgf",
        [](const gcp::RateVector& r, const gcp::SplitSpec& s, const std::vector<double>& u, double t) {
            return gcp::type2_joint_pgf(r, s, u, t);
        },
        py::arg("rates"), py::arg("spec"), py::arg("u"), py::arg("t"));
    m.def("type2_covariance", &gcp::type2_covariance, py::arg("rates"), py::arg("spec"), py::arg("x"), py::arg("y"),
          py::arg("t"));

    py::class_<gcp::PacketModel>(m, "PacketModel")
        .def(py::init<gcp::MergeFamily, std::size_t>(), py::arg("family"), py::arg("source"))
        .def_property_readonly("source_total", &gcp::PacketModel::source_total)
        .def_property_readonly("total", &gcp::PacketModel::total);
    m.def("packet_joint_pmf", &gcp::packet_joint_pmf, py::arg("model"), py::arg("a"), py::arg("n"), py::arg("t"));
    m.def("packet_joint_pgf", &gcp::packet_joint_pgf, py::arg("model"), py::arg("u"), py::arg("v"), py::arg("t"));
    m.def("conditional_source_binomial", &gcp::conditional_source_binomial, py::arg("model"), py::arg("a"),
          py::arg("b"));
    m.def("packet_covariance", &gcp::packet_covariance, py::arg("model"), py::arg("t"));
    m.def("packet_correlation", &gcp::packet_correlation, py::arg("model"));

    py::class_<gcp::SamplePath>(m, "SamplePath")
        .def_property_readonly("horizon", &gcp::SamplePath::horizon)
        .def_property_readonly("k", &gcp::SamplePath::k)
        .def_property_readonly("events",
                               [](const gcp::SamplePath& p) {
                                   std::vector<std::pair<double, std::uint32_t>> out;
                                   for (const auto& e : p.events()) out.emplace_back(e.time, e.size);
                                   return out;
                               })
        .def("count_at", [](const gcp::SamplePath& p, double t) { return gcp::count_at(p, t); }, py::arg("t"))
        .def("__eq__", [](const gcp::SamplePath& a, const gcp::SamplePath& b) { return a == b; })
        .def("__str__", &gcp::serialize_path);
    m.def(
        "sample_path",
        [](const gcp::RateVector& r, double horizon, std::uint64_t seed, std::uint64_t stream) {
            return gcp::sample_path(r, horizon, gcp::SeedSpec{seed, stream});
        },
        py::arg("rates"), py::arg("horizon"), py::arg("seed"), py::arg("stream_id") = 0);
    m.def(
        "split_path",
        [](const gcp::SamplePath& p, const gcp::SplitSpec& s, int type, std::uint64_t seed, std::uint64_t stream) {
            if (type != 1 && type != 2) throw std::invalid_argument("split_path: type must be 1 or 2");
            const gcp::SeedSpec spec{seed, stream};
            return type == 1 ? gcp::type1_thin_path(p, s, spec) : gcp::type2_split_path(p, s, spec);
        },
        py::arg("path"), py::arg("spec"), py::arg("type"), py::arg("seed"), py::arg("stream_id") = 0);
    m.def("superpose_paths", &gcp::superpose_paths, py::arg("paths"));

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, std::size_t replications) {
            gcp::VerificationReport report;
            {
                py::gil_scoped_release unlocked;
                report = gcp::run_suite(suite, gcp::VerifyOptions{seed, replications});
            }
            py::list out;
            for (const auto& r : report.records()) {
                out.append(py::dict(py::arg("name") = r.name, py::arg("statistic") = r.statistic,
                                    py::arg("band") = py::make_tuple(r.band_lo, r.band_hi), py::arg("pass") = r.pass));
            }
            return out;
        },
        py::arg("suite") = "all", py::arg("seed") = 42, py::arg("replications") = 100000);

    m.def("fishing_report", &gcp::fishing_report, py::arg("fish_types"), py::arg("t"), py::arg("b") = py::none());
    m.def("hotel_report", &gcp::hotel_report, py::arg("bookings"), py::arg("room_types"),
          py::arg("caps") = std::vector<std::size_t>{}, py::arg("t") = 1.0);
}
