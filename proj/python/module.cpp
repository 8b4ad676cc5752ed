#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hawkes/bell.hpp"
#include "hawkes/borel.hpp"
#include "hawkes/cumulants.hpp"
#include "hawkes/partitions.hpp"
#include "hawkes/simulate.hpp"

#include <span>
#include <vector>

namespace py = pybind11;
using namespace hawkes;

namespace {

CumulantVector cumulants_py(int order, double nu, double a, double b, double t) {
    return cumulants(order, KernelParams{nu, a, b, t});
}

SampleStats run_simulation_py(double nu, double a, double b, std::vector<double> t_grid,
                              std::uint64_t samples, std::uint64_t seed,
                              const std::string& method, int max_threads) {
    SimConfig config;
    config.t_grid = std::move(t_grid);
    config.params = {nu, a, b, config.t_grid.empty() ? 0.0 : config.t_grid.back()};
    config.samples = samples;
    config.seed = seed;
    if (method == "cluster") {
        config.method = SimMethod::cluster;
    } else if (method == "thinning") {
        config.method = SimMethod::thinning;
    } else {
        throw std::invalid_argument("method must be 'cluster' or 'thinning'");
    }
    config.max_threads = max_threads;
    return run_simulation(config);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact cumulants of exponential-kernel Hawkes processes and their "
              "Monte Carlo verification";

    m.def("bell_number", &bell_number, py::arg("n"));
    m.def(
        "enumerate_partitions",
        [](int n) {
            std::vector<std::vector<std::vector<int>>> out;
            for (const auto& p : enumerate_partitions(n)) out.push_back(p.blocks);
            return out;
        },
        py::arg("n"));
    m.def(
        "partial_bell",
        [](int n, int k, const std::vector<double>& args) {
            return partial_bell<double>(n, k, args);
        },
        py::arg("n"), py::arg("k"), py::arg("args"));
    m.def(
        "complete_bell",
        [](int n, const std::vector<double>& args) { return complete_bell<double>(n, args); },
        py::arg("n"), py::arg("args"));
    m.def(
        "moments_from_cumulants",
        [](const std::vector<double>& kappas) { return moments_from_cumulants(kappas); },
        py::arg("kappas"));
    m.def(
        "cumulants_from_moments",
        [](const std::vector<double>& moments) { return cumulants_from_moments(moments); },
        py::arg("moments"));

    m.def(
        "borel_cumulants",
        [](double mu, int order) { return borel_cumulants(BorelParams{mu}, order); },
        py::arg("mu"), py::arg("order") = 4);
    m.def(
        "borel_pmf", [](double mu, std::int64_t n) { return borel_pmf(BorelParams{mu}, n); },
        py::arg("mu"), py::arg("n"));
    m.def(
        "borel_sample",
        [](double mu, std::uint64_t seed, std::uint64_t count) {
            SplitRng rng(seed, 0);
            std::vector<std::uint64_t> out(count);
            for (auto& x : out) x = borel_sample(BorelParams{mu}, rng);
            return out;
        },
        py::arg("mu"), py::arg("seed") = 1, py::arg("count") = 1);

    py::class_<CumulantVector>(m, "CumulantVector")
        .def_readonly("order", &CumulantVector::order)
        .def_readonly("values", &CumulantVector::values)
        .def_readonly("skewness", &CumulantVector::skewness)
        .def_readonly("excess_kurtosis", &CumulantVector::excess_kurtosis);

    m.def("cumulants", &cumulants_py, py::arg("order"), py::arg("nu"), py::arg("a"), py::arg("b"),
          py::arg("t"));
    m.def(
        "closed_form_reference",
        [](int order, double nu, double a, double b, double t) {
            return closed_form_reference(order, KernelParams{nu, a, b, t});
        },
        py::arg("order"), py::arg("nu"), py::arg("a"), py::arg("b"), py::arg("t"));
    m.def(
        "mean_intensity",
        [](double nu, double a, double b, double t) {
            return mean_intensity(KernelParams{nu, a, b, t});
        },
        py::arg("nu"), py::arg("a"), py::arg("b"), py::arg("t"));
    m.def(
        "intensity_count_moment",
        [](double nu, double a, double b, double t) {
            return intensity_count_moment(KernelParams{nu, a, b, t});
        },
        py::arg("nu"), py::arg("a"), py::arg("b"), py::arg("t"));
    m.def("partition_term_count", &partition_term_count, py::arg("n"));

    m.def(
        "k_statistics",
        [](const std::vector<double>& values) { return k_statistics(values); },
        py::arg("values"));

    py::class_<GridPointStats>(m, "GridPointStats")
        .def_readonly("t", &GridPointStats::t)
        .def_readonly("count_kstats", &GridPointStats::count_kstats)
        .def_readonly("intensity_mean", &GridPointStats::intensity_mean)
        .def_readonly("joint_mean", &GridPointStats::joint_mean)
        .def_readonly("std_errors", &GridPointStats::std_errors)
        .def_readonly("skewness", &GridPointStats::skewness)
        .def_readonly("excess_kurtosis", &GridPointStats::excess_kurtosis)
        .def_readonly("se_skewness", &GridPointStats::se_skewness)
        .def_readonly("se_excess_kurtosis", &GridPointStats::se_excess_kurtosis);
    py::class_<SampleStats>(m, "SampleStats")
        .def_readonly("samples", &SampleStats::samples)
        .def_readonly("batches", &SampleStats::batches)
        .def_readonly("grid", &SampleStats::grid);

    m.def("run_simulation", &run_simulation_py, py::arg("nu"), py::arg("a"), py::arg("b"),
          py::arg("t_grid"), py::arg("samples") = 100000, py::arg("seed") = 1,
          py::arg("method") = "cluster", py::arg("max_threads") = 0);
}
