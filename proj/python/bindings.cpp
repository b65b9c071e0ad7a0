// Python bindings for the main operations: hashers, selection and layers,
// GF(2) independence, the bound calculator, sketches, and the experiment
// runner (JSON config in, JSON report out).

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tornadohash/bounds.hpp"
#include "tornadohash/gf2.hpp"
#include "tornadohash/harness.hpp"
#include "tornadohash/sketches.hpp"

namespace py = pybind11;
namespace th = tornadohash;

namespace {

std::vector<th::Key> to_keys(const std::vector<std::uint64_t>& bits) {
    std::vector<th::Key> keys;
    keys.reserve(bits.size());
    for (auto b : bits) keys.push_back(th::Key{b});
    return keys;
}

py::dict bound_dict(const th::bounds::ProbBound& b) {
    py::dict d;
    d["value"] = b.value;
    d["raw"] = b.raw;
    d["exp_term"] = b.exp_term;
    d["additive_term"] = b.additive_term;
    d["vacuous"] = b.vacuous;
    d["warnings"] = b.warnings;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tornado tabulation hashing, concentration bounds, and sketches";

    py::class_<th::HashParams>(m, "HashParams")
        .def(py::init([](std::uint32_t c, std::uint32_t d, std::uint32_t char_bits,
                         std::uint32_t range_bits) {
                 th::HashParams p{c, d, char_bits, range_bits};
                 p.validate();
                 return p;
             }),
             py::arg("c") = 4, py::arg("d") = 0, py::arg("char_bits") = 16,
             py::arg("range_bits") = 64)
        .def_readonly("c", &th::HashParams::c)
        .def_readonly("d", &th::HashParams::d)
        .def_readonly("char_bits", &th::HashParams::char_bits)
        .def_readonly("range_bits", &th::HashParams::range_bits)
        .def_property_readonly("sigma", &th::HashParams::sigma);

    py::class_<th::SimpleTabulation>(m, "SimpleTabulation")
        .def(py::init<std::uint64_t, th::HashParams>(), py::arg("seed"), py::arg("params"))
        .def("hash", [](const th::SimpleTabulation& h, std::uint64_t k) { return h.hash(th::Key{k}); });

    py::class_<th::TornadoHasher>(m, "TornadoHasher")
        .def(py::init<std::uint64_t, th::HashParams>(), py::arg("seed"), py::arg("params"))
        .def("hash", [](const th::TornadoHasher& h, std::uint64_t k) { return h.hash(th::Key{k}); })
        .def("derive",
             [](const th::TornadoHasher& h, std::uint64_t k) {
                 const th::DerivedKey dk = h.derive(th::Key{k});
                 return std::vector<std::uint32_t>(dk.chars.begin(), dk.chars.begin() + dk.len);
             })
        .def("split", [](const th::TornadoHasher& h, std::uint64_t k) {
            const auto s = h.split(th::Key{k});
            return py::make_tuple(s.hbar0, s.hbar1);
        });

    py::class_<th::RandomOracle>(m, "RandomOracle")
        .def(py::init<std::uint64_t, th::HashParams>(), py::arg("seed"), py::arg("params"))
        .def("hash", [](const th::RandomOracle& h, std::uint64_t k) { return h.hash(th::Key{k}); });

    m.def(
        "select_tornado",
        [](const std::vector<std::uint64_t>& keys, const th::TornadoHasher& h, std::uint32_t t,
           std::uint64_t mask) {
            const auto ks = to_keys(keys);
            const auto r = th::select(std::span<const th::Key>(ks), h, th::Selector{t, mask});
            std::vector<std::uint64_t> out;
            for (auto k : r.selected) out.push_back(k.bits);
            return out;
        },
        py::arg("keys"), py::arg("hasher"), py::arg("t"), py::arg("mask") = 0);

    m.def("layer_profile", [](const std::vector<std::uint64_t>& bucket_sizes) {
        return th::layer_profile_from_sizes(bucket_sizes).s;
    });

    m.def(
        "derived_independent",
        [](const th::TornadoHasher& h, const std::vector<std::uint64_t>& keys, bool prefix_only) {
            const auto ks = to_keys(keys);
            return static_cast<bool>(th::gf2::derived_independent(h, ks, prefix_only));
        },
        py::arg("hasher"), py::arg("keys"), py::arg("prefix_only") = false);

    m.def("is_linearly_independent",
          [](const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& fam) {
              th::gf2::KeyFamily f;
              for (const auto& g : fam) {
                  th::gf2::GeneralizedKey gk;
                  for (auto [pos, chr] : g) gk.push_back({pos, chr});
                  f.members.push_back(std::move(gk));
              }
              return static_cast<bool>(th::gf2::is_linearly_independent(f));
          });

    m.def("zero_bound", [](std::uint64_t n, std::uint32_t c, std::uint32_t k) {
        return th::gf2::zero_bound(n, c, k).str();
    });

    // bounds
    m.def("classic_chernoff",
          [](double d, double mu) { return bound_dict(th::bounds::classic_chernoff(d, mu)); });
    m.def("upper_tail_tornado",
          [](double d, double mu) { return bound_dict(th::bounds::upper_tail_tornado(d, mu)); });
    m.def("local_uniformity_error",
          [](double s, double b) { return bound_dict(th::bounds::local_uniformity_error(s, b)); });
    m.def(
        "pretty1_bound",
        [](double delta, double mu, double sigma, double b, double c) {
            return bound_dict(th::bounds::pretty1_bound({delta, mu, sigma, b, c}));
        },
        py::arg("delta"), py::arg("mu"), py::arg("sigma"), py::arg("b") = 1, py::arg("c") = 4);
    m.def(
        "subsampling_bound",
        [](double delta, double mu, double sigma, double b, double c) {
            return bound_dict(th::bounds::subsampling_bound({delta, mu, sigma, b, c}));
        },
        py::arg("delta"), py::arg("mu"), py::arg("sigma"), py::arg("b") = 1, py::arg("c") = 4);
    m.def("mu_bar", [](double i, double f, double sigma) { return th::bounds::mu_bar(i, f, sigma).value; });
    m.def("lambert_w_upper", [](double x) { return th::bounds::lambert_w_upper(x).value; });
    m.def("lambert_w_newton", &th::bounds::lambert_w_newton);
    m.def(
        "symbol_table",
        [](double p, double mu, double sigma, double c, double d, double sel_bits) {
            const auto t = th::bounds::symbol_table(p, mu, sigma, c, d, sel_bits);
            py::dict out;
            out["s_sec"] = t.s_sec;
            out["s_all"] = t.s_all;
            out["p_reg"] = t.p_reg;
            out["i_nr"] = t.i_nr;
            out["i_max"] = t.i_max;
            out["n_top"] = t.n_top;
            out["p_top"] = t.p_top;
            out["eps3"] = t.eps3;
            out["delta_reg"] = t.delta_reg;
            out["delta_inr"] = t.delta_inr;
            out["delta_top"] = t.delta_top;
            out["delta_nonreg"] = t.delta_nonreg;
            out["gamma1"] = t.gamma1;
            out["gamma2"] = t.gamma2;
            out["warnings"] = t.warnings;
            return out;
        },
        py::arg("p"), py::arg("mu"), py::arg("sigma"), py::arg("c") = 4, py::arg("d") = 4,
        py::arg("sel_bits") = 0);

    // sketches
    py::class_<th::sketch::BottomKSketch>(m, "BottomKSketch")
        .def("distinct_estimate", &th::sketch::BottomKSketch::distinct_estimate)
        .def("threshold",
             [](const th::sketch::BottomKSketch& s) -> py::object {
                 if (auto t = s.threshold()) return py::int_(*t);
                 return py::none();
             })
        .def("serialize",
             [](const th::sketch::BottomKSketch& s) {
                 const auto b = s.serialize();
                 return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
             })
        .def("debug_json", &th::sketch::BottomKSketch::debug_json)
        .def("__eq__", [](const th::sketch::BottomKSketch& a, const th::sketch::BottomKSketch& b) {
            return a == b;
        });

    m.def("bottomk_build",
          [](const std::vector<std::uint64_t>& keys, std::uint64_t k, const th::TornadoHasher& h) {
              const auto ks = to_keys(keys);
              return th::sketch::bottomk_build(std::span<const th::Key>(ks), k, h);
          });
    m.def("bottomk_union", &th::sketch::bottomk_union);

    py::class_<th::sketch::KPartitionMinSketch>(m, "KPartitionMinSketch")
        .def("estimate", &th::sketch::KPartitionMinSketch::estimate)
        .def("registers", [](const th::sketch::KPartitionMinSketch& s) {
            return std::vector<int>(s.registers().begin(), s.registers().end());
        });
    m.def("kpm_build",
          [](const std::vector<std::uint64_t>& keys, std::uint64_t k, const th::TornadoHasher& h) {
              const auto ks = to_keys(keys);
              return th::sketch::kpm_build(std::span<const th::Key>(ks), k, h);
          });
    m.def("kpm_union", &th::sketch::kpm_union);

    py::class_<th::sketch::VectorKSample>(m, "VectorKSample")
        .def("holes", &th::sketch::VectorKSample::holes)
        .def_property_readonly("j_rep", &th::sketch::VectorKSample::j_rep);
    m.def(
        "vectork_build",
        [](const std::vector<std::uint64_t>& keys, std::uint64_t k, double p,
           const th::TornadoHasher& h, std::uint32_t j_override) {
            const auto ks = to_keys(keys);
            return th::sketch::vectork_build(std::span<const th::Key>(ks), k, p, h, j_override);
        },
        py::arg("keys"), py::arg("k"), py::arg("target_error_p"), py::arg("hasher"),
        py::arg("j_override") = 0);
    m.def("jaccard_estimate", &th::sketch::jaccard_estimate);

    m.def(
        "threshold_sample",
        [](const std::vector<std::uint64_t>& keys, const th::TornadoHasher& h, std::uint64_t num,
           std::uint32_t log2_den) {
            const auto ks = to_keys(keys);
            const auto out =
                th::sketch::threshold_sample(std::span<const th::Key>(ks), h, th::Dyadic{num, log2_den});
            std::vector<std::uint64_t> bits;
            for (auto k : out) bits.push_back(k.bits);
            return bits;
        },
        py::arg("keys"), py::arg("hasher"), py::arg("num"), py::arg("log2_den"));

    // harness
    m.def("run_experiment_json", [](const std::string& config_json) {
        auto cfg = th::harness::config_from_json(config_json);
        th::harness::apply_env_overrides(cfg);
        std::string js;
        const int rc = th::harness::run_experiment(cfg, nullptr, &js);
        return py::make_tuple(rc, js);
    });
    m.def("config_sha256", [](const std::string& config_json) {
        return th::harness::config_sha256(th::harness::config_from_json(config_json));
    });
}
