#pragma once

// Closed-form isotropic components of C and D, stored exactly as the
// published tables print them: each group is
//
//     value = L^p / denominator * (eta * kbar_eta + tau * kbar_tau)
//
// and each printed row lists the components equal to `multiplier * value`.
// Two rows carry multipliers other than one, fixed by quadrature:
//   "3d5" rows equal d5 / 3 (e.g. D_112233 = L^4/1680 (kbar_eta - 32 kbar_tau))
//   "3d6" rows equal 3 d6   (e.g. D_121121 = 3 L^4/1680 (kbar_eta + 24 kbar_tau))
// One printed index is a misprint: the 3D d2 list gives D_212222, which has an
// odd count of index 1 and is identically zero; the member is D_212111.
// The entry keeps the printed string in `printed_as`.
//
// 2D and 3D groups are separate tables, so d5 (2D) and d5 (3D) never mix.

#include <cstddef>
#include <string_view>
#include <vector>

namespace sgm {

struct ComponentEntry {
    std::string_view index;            // 1-based digits, e.g. "112233"
    std::string_view printed_as = {};  // non-empty only where the printed index was corrected
};

struct TableRow {
    std::string_view label;  // row label as printed ("d5", "3d5", "C_1212", ...)
    double multiplier;       // component value = multiplier * group value
    std::vector<ComponentEntry> components;
};

struct ClosedFormGroup {
    std::string_view name;
    int length_power;
    double eta;
    double tau;
    double denominator;
    std::vector<TableRow> rows;

    double value(double L, double kbar_eta, double kbar_tau) const {
        double lp = 1.0;
        for (int k = 0; k < length_power; ++k) lp *= L;
        return lp * (eta * kbar_eta + tau * kbar_tau) / denominator;
    }
};

// A single named closed form (no component list), e.g. c3 or a probe component.
struct ClosedForm {
    std::string_view name;
    int length_power;
    double eta;
    double tau;
    double denominator;

    double value(double L, double kbar_eta, double kbar_tau) const {
        double lp = 1.0;
        for (int k = 0; k < length_power; ++k) lp *= L;
        return lp * (eta * kbar_eta + tau * kbar_tau) / denominator;
    }
};

inline const std::vector<ClosedFormGroup>& c_groups_2d() {
    static const std::vector<ClosedFormGroup> t{
        {"C_1111", 2, 3, 4, 8, {{"C_1111", 1.0, {{"1111"}, {"2222"}}}}},
        {"C_1122", 2, 1, -4, 8, {{"C_1122", 1.0, {{"1122"}, {"2211"}}}}},
        {"C_1212", 2, 1, 4, 8, {{"C_1212", 1.0, {{"1212"}, {"1221"}, {"2112"}, {"2121"}}}}},
    };
    return t;
}

inline const std::vector<ClosedFormGroup>& c_groups_3d() {
    static const std::vector<ClosedFormGroup> t{
        {"C_1111", 2, 3, 8, 15, {{"C_1111", 1.0, {{"1111"}, {"2222"}, {"3333"}}}}},
        {"C_1122", 2, 1, -4, 15,
         {{"C_1122", 1.0, {{"1122"}, {"1133"}, {"2211"}, {"2233"}, {"3311"}, {"3322"}}}}},
        {"C_1212", 2, 1, 6, 15,
         {{"C_1212", 1.0, {{"1212"}, {"1221"}, {"1313"}, {"1331"}, {"2112"}, {"2121"}}},
          {"C_1212", 1.0, {{"2323"}, {"2332"}, {"3113"}, {"3131"}, {"3223"}, {"3232"}}}}},
    };
    return t;
}

inline const std::vector<ClosedFormGroup>& d_groups_2d() {
    static const std::vector<ClosedFormGroup> t{
        {"d1", 4, 5, 4, 256,
         {
             {"d1", 1.0, {{"111111"}, {"222222"}}},
         }},
        {"d2", 4, 1, 4, 256,
         {
             {"d2", 1.0, {{"111122"}, {"111212"}, {"121222"}, {"122111"}}},
             {"d2", 1.0, {{"211222"}, {"212111"}, {"222121"}, {"222211"}}},
         }},
        {"d3", 4, 1, -12, 256,
         {
             {"d3", 1.0, {{"111221"}, {"112222"}, {"221111"}, {"222112"}}},
         }},
        {"d4", 4, 1, 52, 256,
         {
             {"d4", 1.0, {{"112112"}, {"221221"}}},
         }},
        {"d5", 4, 1, -28, 256,
         {
             {"d5", 1.0, {{"112121"}, {"112211"}, {"121112"}, {"122221"}}},
             {"d5", 1.0, {{"211112"}, {"212221"}, {"221122"}, {"221212"}}},
         }},
        {"d6", 4, 1, 20, 256,
         {
             {"d6", 1.0, {{"121121"}, {"121211"}, {"122122"}, {"122212"}}},
             {"d6", 1.0, {{"211121"}, {"211211"}, {"212122"}, {"212212"}}},
         }},
    };
    return t;
}

inline const std::vector<ClosedFormGroup>& d_groups_3d() {
    static const std::vector<ClosedFormGroup> t{
        {"d1", 4, 5, 8, 560,
         {
             {"d1", 1.0, {{"111111"}, {"222222"}, {"333333"}}},
         }},
        {"d2", 4, 3, 16, 1680,
         {
             {"d2", 1.0, {{"111122"}, {"111133"}, {"111212"}, {"111313"}, {"121222"}, {"122111"}, {"131333"}, {"133111"}}},
             {"d2", 1.0, {{"211222"}, {"212111", "212222"}, {"222121"}, {"222211"}, {"222233"}, {"222323"}, {"232333"}, {"233222"}}},
             {"d2", 1.0, {{"311333"}, {"313111"}, {"322333"}, {"323222"}, {"333131"}, {"333232"}, {"333311"}, {"333322"}}},
         }},
        {"d3", 4, 3, -40, 1680,
         {
             {"d3", 1.0, {{"111221"}, {"111331"}, {"112222"}, {"113333"}}},
             {"d3", 1.0, {{"221111"}, {"222112"}, {"222332"}, {"223333"}}},
             {"d3", 1.0, {{"331111"}, {"332222"}, {"333113"}, {"333223"}}},
         }},
        {"d4", 4, 3, 184, 1680,
         {
             {"d4", 1.0, {{"112112"}, {"113113"}, {"221221"}, {"223223"}, {"331331"}, {"332332"}}},
         }},
        {"d5", 4, 1, -32, 560,
         {
             {"d5", 1.0, {{"112121"}, {"112211"}, {"113131"}, {"113311"}, {"121112"}, {"122221"}, {"131113"}, {"133331"}}},
             {"d5", 1.0, {{"211112"}, {"212221"}, {"221122"}, {"221212"}, {"223232"}, {"223322"}, {"232223"}, {"233332"}}},
             {"d5", 1.0, {{"311113"}, {"313331"}, {"322223"}, {"323332"}, {"331133"}, {"331313"}, {"332233"}, {"332323"}}},
             {"3d5", 1.0 / 3.0, {{"112233"}, {"112323"}, {"113232"}, {"113322"}, {"121332"}, {"122331"}, {"123132"}, {"123231"}}},
             {"3d5", 1.0 / 3.0, {{"123312"}, {"123321"}, {"131223"}, {"132123"}, {"132213"}, {"132231"}, {"132321"}, {"133221"}}},
             {"3d5", 1.0 / 3.0, {{"211332"}, {"212331"}, {"213132"}, {"213231"}, {"213312"}, {"213321"}, {"221133"}, {"221313"}}},
             {"3d5", 1.0 / 3.0, {{"223131"}, {"223311"}, {"231123"}, {"231132"}, {"231213"}, {"231312"}, {"232113"}, {"233112"}}},
             {"3d5", 1.0 / 3.0, {{"311223"}, {"312123"}, {"312213"}, {"312231"}, {"312321"}, {"313221"}, {"321123"}, {"321132"}}},
             {"3d5", 1.0 / 3.0, {{"321213"}, {"321312"}, {"322113"}, {"323112"}, {"331122"}, {"331212"}, {"332121"}, {"332211"}}},
         }},
        {"d6", 4, 1, 24, 1680,
         {
             {"d6", 1.0, {{"112332"}, {"113223"}, {"121233"}, {"121323"}, {"122133"}}},
             {"d6", 1.0, {{"122313"}, {"131232"}, {"131322"}, {"133122"}, {"133212"}}},
             {"d6", 1.0, {{"211233"}, {"211323"}, {"212133"}, {"212313"}, {"221331"}}},
             {"d6", 1.0, {{"223113"}, {"232131"}, {"232311"}, {"233121"}, {"233211"}}},
             {"d6", 1.0, {{"311232"}, {"311322"}, {"313122"}, {"313212"}, {"322131"}}},
             {"d6", 1.0, {{"322311"}, {"323121"}, {"323211"}, {"331221"}, {"332112"}}},
             {"3d6", 3.0, {{"121121"}, {"121211"}, {"122122"}, {"122212"}, {"131131"}, {"131311"}, {"133133"}, {"133313"}}},
             {"3d6", 3.0, {{"211121"}, {"211211"}, {"212122"}, {"212212"}, {"232232"}, {"232322"}, {"233233"}, {"233323"}}},
             {"3d6", 3.0, {{"311131"}, {"311311"}, {"313133"}, {"313313"}, {"322232"}, {"322322"}, {"323233"}, {"323323"}}},
         }},
        {"d7", 4, 1, 80, 1680,
         {
             {"d7", 1.0, {{"123123"}, {"123213"}, {"132132"}, {"132312"}}},
             {"d7", 1.0, {{"213123"}, {"213213"}, {"231231"}, {"231321"}}},
             {"d7", 1.0, {{"312132"}, {"312312"}, {"321231"}, {"321321"}}},
         }},
    };
    return t;
}

// The five 3D components that determine the isotropic coefficients.
inline const std::vector<ClosedForm>& d_probes_3d() {
    static const std::vector<ClosedForm> t{
        {"111111", 4, 5, 8, 560},
        {"221221", 4, 3, 184, 1680},
        {"111221", 4, 3, -40, 1680},
        {"221122", 4, 1, -32, 560},
        {"112233", 4, 1, -32, 1680},
    };
    return t;
}

// Isotropic gradient coefficients c3..c7 in terms of the integrated stiffnesses.
inline const std::vector<ClosedForm>& iso_coefficients_3d() {
    static const std::vector<ClosedForm> t{
        {"c3", 4, 1, -32, 1680},
        {"c4", 4, 1, 24, 1680},
        {"c5", 4, 1, 24, 1680},
        {"c6", 4, 1, 80, 1680},
        {"c7", 4, 1, -32, 1680},
    };
    return t;
}

inline const std::vector<ClosedFormGroup>& c_groups(std::size_t dim) {
    return dim == 2 ? c_groups_2d() : c_groups_3d();
}

inline const std::vector<ClosedFormGroup>& d_groups(std::size_t dim) {
    return dim == 2 ? d_groups_2d() : d_groups_3d();
}

} // namespace sgm
