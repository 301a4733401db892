#include <memory>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlab/blaschke_carleson.hpp"
#include "nlab/dyadic_model.hpp"
#include "nlab/nevanlinna_gauges.hpp"
#include "nlab/peak_builder.hpp"
#include "nlab/witness_optimizer.hpp"

namespace py = pybind11;
using namespace nlab;

namespace {

using FamilyPtr = std::shared_ptr<SequenceFamily>;

py::dict point_dict(const FamilyPoint& fp) {
    py::dict d;
    d["kind"] = fp.idx.kind == PointKind::A ? "A" : "B";
    d["n"] = fp.idx.n;
    d["k"] = fp.idx.k;
    d["m"] = fp.idx.m;
    d["angle_rad"] = fp.point.angle.radians();
    d["gap"] = fp.point.gap.to_double();
    d["log2_inv_gap"] = -fp.point.gap.log().to_double() / std::numbers::ln2;
    d["z"] = fp.point.to_complex();
    return d;
}

struct PyPeak {
    FamilyPtr fam;
    PeakFunction f;
};

PyPeak make_peak(const FamilyPtr& fam, std::size_t pos, const std::string& mode,
                 const std::string& mu_json) {
    if (pos >= fam->size()) throw py::index_error("pos out of range");
    std::string m = mode;
    if (m == "auto") m = fam->family == FamilyKind::Smirnov ? "smirnov" : "nevanlinna";
    if (m == "nevanlinna") return {fam, build_peak_nevanlinna(*fam, pos)};
    if (m == "smirnov") return {fam, build_peak_smirnov(*fam, pos, default_smirnov_params(*fam))};
    if (m == "necessity") {
        if (mu_json.empty()) throw py::value_error("necessity mode needs mu_json");
        return {fam, build_necessity_peak(*fam, pos, BoundaryMeasure::from_json(mu_json))};
    }
    throw py::value_error("mode must be auto, nevanlinna, smirnov, or necessity");
}

py::dict witness_dict(const WitnessResult& w) {
    py::dict d;
    d["value"] = w.value;
    d["support"] = w.support;
    d["dual_value"] = w.dual_value;
    d["duality_gap"] = w.duality_gap;
    d["max_dual_violation"] = w.max_dual_violation;
    d["comp_slack_residual"] = w.comp_slack_residual;
    d["optimal"] = w.optimal;
    d["grid_warning"] = w.grid_warning;
    d["columns"] = w.columns;
    d["constraints"] = w.constraints;
    return d;
}

} // namespace

PYBIND11_MODULE(_nlab, mod) {
    mod.doc() = "interpolating-sequence constructions on the unit disk";

    py::class_<SequenceFamily, FamilyPtr>(mod, "Family")
        .def_property_readonly("kind",
                               [](const SequenceFamily& f) {
                                   return f.family == FamilyKind::Smirnov ? "smirnov"
                                                                          : "nevanlinna";
                               })
        .def_property_readonly("n_gen", [](const SequenceFamily& f) { return f.n_gen; })
        .def("__len__", &SequenceFamily::size)
        .def("point", [](const SequenceFamily& f, std::size_t i) {
            if (i >= f.size()) throw py::index_error("point index out of range");
            return point_dict(f.at(i));
        })
        .def("points",
             [](const SequenceFamily& f) {
                 py::list out;
                 for (const FamilyPoint& fp : f.points()) out.append(point_dict(fp));
                 return out;
             })
        .def("rho", [](const SequenceFamily& f, std::size_t i, std::size_t j) {
            if (i >= f.size() || j >= f.size()) throw py::index_error("index out of range");
            return f.member_rho(i, j).to_double();
        })
        .def("log_rho", [](const SequenceFamily& f, std::size_t i, std::size_t j) {
            if (i >= f.size() || j >= f.size()) throw py::index_error("index out of range");
            LogMagnitude r = f.member_rho(i, j);
            return r.is_zero() ? -std::numeric_limits<double>::infinity()
                               : r.log().to_double();
        })
        .def("to_csv", [](const SequenceFamily& f) {
            std::ostringstream os;
            f.export_csv(os);
            return os.str();
        });

    mod.def("build_nevanlinna",
            [](int n_gen, int m_extra) {
                return std::make_shared<SequenceFamily>(
                    SequenceFamily::build_nevanlinna(n_gen, m_extra));
            },
            py::arg("n_gen"), py::arg("m_extra") = 0);
    mod.def("build_smirnov", [](int n_gen) {
        return std::make_shared<SequenceFamily>(SequenceFamily::build_smirnov(n_gen));
    });
    mod.def("family_from_csv", [](const std::string& text) {
        std::istringstream is(text);
        return std::make_shared<SequenceFamily>(SequenceFamily::import_csv(is));
    });

    mod.def("rho",
            [](std::complex<double> z, std::complex<double> w) {
                return rho(DiskPoint::from_complex(z), DiskPoint::from_complex(w)).to_double();
            },
            "pseudo-hyperbolic distance |(z-w)/(1-conj(z)w)|");

    mod.def("blaschke_sum", &nevanlinna_blaschke_sum, py::arg("n_gen"), py::arg("m_extra"),
            py::arg("with_tails") = true);

    mod.def("log_B_omit", [](const FamilyPtr& fam, std::size_t pos) {
        if (pos >= fam->size()) throw py::index_error("pos out of range");
        LogBOmit b = log_B_omit(*fam, pos);
        py::dict d;
        d["log"] = b.log_double();
        d["tail_bound"] = b.tail_bound;
        return d;
    });

    mod.def("carleson_report",
            [](const FamilyPtr& fam, int max_depth) {
                CarlesonReport r = carleson_norm(*fam, max_depth);
                py::dict d;
                d["norm"] = r.norm;
                d["depth_scanned"] = r.depth_scanned;
                d["blaschke_sum"] = r.blaschke_sum;
                d["min_sep"] = r.min_sep.is_zero() ? 0.0 : r.min_sep.to_double();
                if (r.argmax) d["argmax"] = py::make_tuple(r.argmax->n, r.argmax->k);
                return d;
            },
            py::arg("family"), py::arg("max_depth") = 12);

    py::class_<PyPeak>(mod, "Peak")
        .def_property_readonly("mode", [](const PyPeak& p) { return p.f.mode; })
        .def("__call__", [](const PyPeak& p, std::complex<double> z) { return p.f.eval(z); })
        .def("log_modulus",
             [](const PyPeak& p, double gap, double theta) { return p.f.log_modulus(gap, theta); },
             py::arg("gap"), py::arg("theta"))
        .def("at_member",
             [](const PyPeak& p, std::size_t pos) {
                 if (pos >= p.fam->size()) throw py::index_error("pos out of range");
                 LogMagnitude v = p.f.eval_mod_member(*p.fam, pos);
                 return v.is_zero() ? -std::numeric_limits<double>::infinity()
                                    : v.log().to_double();
             },
             "log|f| at a family member, exact twin-aware path; -inf at a zero")
        .def("to_json", [](const PyPeak& p) { return p.f.to_json(); });

    mod.def("build_peak", &make_peak, py::arg("family"), py::arg("pos"),
            py::arg("mode") = "auto", py::arg("mu_json") = "");

    mod.def("gauge_ladder",
            [](const PyPeak& p, const std::string& gauge, int j_max, double rel_tol) {
                GaugeFunction g = gauge == "psi" ? GaugeFunction::psi_llog()
                                                 : GaugeFunction::identity();
                if (gauge != "psi" && gauge != "log1p")
                    throw py::value_error("gauge must be psi or log1p");
                GaugeReport r = gauge_ladder(p.f, g, j_max, rel_tol);
                py::dict d;
                d["ladder_j"] = r.ladder_j;
                d["values"] = r.values;
                d["self_conv"] = r.self_conv;
                d["converged"] = r.converged;
                d["limit"] = r.estimate.limit;
                d["error_bar"] = r.estimate.error_bar;
                d["cauchy"] = r.estimate.cauchy;
                return d;
            },
            py::arg("peak"), py::arg("gauge") = "log1p", py::arg("j_max") = 10,
            py::arg("rel_tol") = 1e-10);

    mod.def("min_mass_lp",
            [](const FamilyPtr& fam, const std::string& rhs, bool density) {
                RhsMode mode = rhs == "full" ? RhsMode::Full : RhsMode::TwinOnly;
                if (rhs != "full" && rhs != "twin_only")
                    throw py::value_error("rhs must be twin_only or full");
                return witness_dict(min_mass_lp(*fam, mode, {}, density));
            },
            py::arg("family"), py::arg("rhs") = "twin_only", py::arg("density") = false);

    mod.def("kernel_sum_sup",
            [](const FamilyPtr& fam, int depth_extra) {
                KernelSumReport r = kernel_sum_sup(*fam, depth_extra);
                py::dict d;
                d["sup"] = r.sup;
                d["sup_theta"] = r.sup_theta;
                d["comparison"] = r.comparison;
                d["ratio"] = r.ratio;
                d["one_dominant_ok"] = r.one_dominant_ok;
                d["grid_size"] = r.grid_size;
                return d;
            },
            py::arg("family"), py::arg("depth_extra") = 4);

    mod.def("smirnov_contradiction",
            [](int n_max, int base_depth) {
                ContradictionReport c = smirnov_contradiction(n_max, base_depth);
                py::dict d;
                d["base_depth"] = c.base_depth;
                d["base_mass"] = c.base_mass;
                d["lhs"] = c.lhs;
                d["sup"] = c.sup;
                d["rhs"] = c.rhs;
                d["crossing_depth"] = c.crossing_depth;
                return d;
            },
            py::arg("n_max") = 8, py::arg("base_depth") = 2);

    mod.def("theorem_A_check", [](const FamilyPtr& fam, const std::string& mu_json) {
        TheoremACheck c = theorem_A_check(*fam, BoundaryMeasure::from_json(mu_json));
        py::list rows;
        for (const auto& r : c.rows) {
            py::dict d;
            d["n"] = r.idx.n;
            d["k"] = r.idx.k;
            d["m"] = r.idx.m;
            d["kind"] = r.idx.kind == PointKind::A ? "A" : "B";
            d["p_mu"] = r.p_mu;
            d["log_inv_b"] = r.log_inv_b;
            d["margin"] = r.margin;
            rows.append(d);
        }
        py::dict d;
        d["rows"] = rows;
        d["accepted"] = c.accepted;
        return d;
    });
}
