#pragma once

#include "ff/common.hpp"
#include "ff/fold.hpp"
#include "ff/gadget.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace ff::verify {

struct Witness {
    std::string what;
    std::vector<int> ids;
    double value = 0;
};

struct Report {
    std::string check;
    bool pass = true;
    double worst = 0;
    std::vector<Witness> witnesses;
    double runtime_s = 0;

    void fail(Witness w);
    void merge(const Report& o);   // associative; keeps the first few witnesses
};

nlohmann::json to_json(const Report& r, bool with_runtime = true);
std::string summary(const Report& r);

// Flat pattern checks.
Report check_kawasaki(const gadget::GadgetPattern& g, double tol = 1e-9);
Report check_developability(const gadget::GadgetPattern& g, double tol = 1e-9);
// Alternating sum at a single vertex given its crease directions (any order).
double kawasaki_residual(std::vector<double> crease_angles);

// Folded geometry checks.
Report check_isometry(const fold::Sheet& s, double tol = 1e-9);
Report check_isometry(const gadget::GadgetPattern& g, const fold::FoldedGadget& f, double tol = 1e-9);
// Transversal crossings only; coplanar contact is left to check_layer_order.
Report check_noncrossing(const fold::Sheet& s, const Tolerances& tol = {});
Report check_containment(const fold::Sheet& s, double z_lo, double z_hi, double tol = 1e-9);
Report check_dihedrals(const fold::Sheet& s, double min_gap = 1e-12);

// Layer order of a flat sheet, derived from a nearby unflattened sheet with identical topology.
Report check_layer_order(const fold::Sheet& flat, const fold::Sheet& near, double area_tol = 1e-14);

Report check_stacked_state(const fold::StackedFoldedState& s, double tol = 1e-9);

struct FlatnessReport {
    Report report;
    double z_spread = 0;
    int residual_regions = 0;
    double residual_height_total = 0;
    double residual_height_bound = 0;   // largest residual height; equals gap / 2^depth per region
};
FlatnessReport check_flatness(const fold::StackedFoldedState& flat, const fold::StackedFoldedState& near,
                              double tol = 1e-9);

struct AreaResult {
    double area = 0;
    double bound = 0;
};
AreaResult moving_crease_area(const gadget::GadgetPattern& g);

} // namespace ff::verify
