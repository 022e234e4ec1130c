#include "combo/report.hpp"

namespace combo::report {

const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> rows{
    {"main", "S_C", "I2D", {{{0.43, Mark::worst}, {0.71, Mark::none}, {0.41, Mark::worst}, {0.9, Mark::best}, {0.86, Mark::none}, {0.34, Mark::worst}, {0.59, Mark::none}, {0.11, Mark::worst}, {0.15, Mark::worst}, {0.43, Mark::none}}}},
    {"main", "S_C", "Copula", {{{0.53, Mark::worst}, {0.6, Mark::none}, {0.52, Mark::worst}, {0.1, Mark::worst}, {0.9, Mark::best}, {0.44, Mark::none}, {0.65, Mark::none}, {0.15, Mark::worst}, {0.32, Mark::none}, {0.26, Mark::worst}}}},
    {"main", "S_C", "Hierarchy.1", {{{0.61, Mark::none}, {0.64, Mark::none}, {0.62, Mark::none}, {0.61, Mark::none}, {0.81, Mark::none}, {0.45, Mark::none}, {0.45, Mark::worst}, {0.3, Mark::none}, {0.47, Mark::none}, {0.52, Mark::none}}}},
    {"main", "S_C", "POCRM", {{{0.75, Mark::best}, {0.71, Mark::none}, {0.69, Mark::none}, {0.78, Mark::none}, {0.54, Mark::worst}, {0.59, Mark::none}, {0.56, Mark::none}, {0.59, Mark::best}, {0.52, Mark::none}, {0.58, Mark::none}}}},
    {"main", "S_C", "DFCOMB", {{{0.54, Mark::worst}, {0.76, Mark::none}, {0.66, Mark::none}, {0.65, Mark::none}, {0.54, Mark::worst}, {0.33, Mark::worst}, {0.69, Mark::none}, {0.48, Mark::none}, {0.15, Mark::worst}, {0.47, Mark::none}}}},
    {"main", "S_C", "gCRM.1", {{{0.69, Mark::none}, {0.65, Mark::none}, {0.71, Mark::none}, {0.42, Mark::none}, {0.81, Mark::none}, {0.59, Mark::none}, {0.67, Mark::none}, {0.34, Mark::none}, {0.47, Mark::none}, {0.55, Mark::none}}}},
    {"main", "S_C", "cBOIN", {{{0.7, Mark::none}, {0.69, Mark::none}, {0.7, Mark::none}, {0.62, Mark::none}, {0.72, Mark::none}, {0.58, Mark::none}, {0.74, Mark::none}, {0.38, Mark::none}, {0.4, Mark::none}, {0.45, Mark::none}}}},
    {"main", "S_C", "cKeyboard", {{{0.67, Mark::none}, {0.7, Mark::none}, {0.7, Mark::none}, {0.6, Mark::none}, {0.72, Mark::none}, {0.56, Mark::none}, {0.71, Mark::none}, {0.38, Mark::none}, {0.4, Mark::none}, {0.45, Mark::none}}}},
    {"main", "S_C", "bCRM", {{{0.72, Mark::none}, {0.75, Mark::none}, {0.66, Mark::none}, {0.76, Mark::none}, {0.52, Mark::worst}, {0.51, Mark::none}, {0.63, Mark::none}, {0.51, Mark::none}, {0.37, Mark::none}, {0.5, Mark::none}}}},
    {"main", "S_OT", "I2D", {{{0.18, Mark::none}, {0.18, Mark::none}, {0.18, Mark::none}, {0.1, Mark::none}, {0.0, Mark::none}, {0.29, Mark::none}, {0.07, Mark::none}, {0.26, Mark::none}, {0.39, Mark::worst}, {0.32, Mark::none}}}},
    {"main", "S_OT", "Copula", {{{0.32, Mark::worst}, {0.19, Mark::none}, {0.36, Mark::worst}, {0.09, Mark::none}, {0.0, Mark::none}, {0.43, Mark::worst}, {0.22, Mark::none}, {0.58, Mark::worst}, {0.55, Mark::worst}, {0.63, Mark::worst}}}},
    {"main", "S_OT", "Hierarchy.1", {{{0.22, Mark::none}, {0.18, Mark::none}, {0.21, Mark::none}, {0.16, Mark::none}, {0.0, Mark::none}, {0.3, Mark::none}, {0.31, Mark::worst}, {0.3, Mark::none}, {0.17, Mark::none}, {0.2, Mark::none}}}},
    {"main", "S_OT", "POCRM", {{{0.12, Mark::none}, {0.24, Mark::none}, {0.08, Mark::best}, {0.22, Mark::worst}, {0.0, Mark::none}, {0.11, Mark::best}, {0.19, Mark::none}, {0.17, Mark::best}, {0.18, Mark::none}, {0.26, Mark::none}}}},
    {"main", "S_OT", "DFCOMB", {{{0.18, Mark::none}, {0.08, Mark::best}, {0.17, Mark::none}, {0.06, Mark::none}, {0.0, Mark::none}, {0.27, Mark::none}, {0.09, Mark::none}, {0.27, Mark::none}, {0.57, Mark::worst}, {0.32, Mark::none}}}},
    {"main", "S_OT", "gCRM.1", {{{0.15, Mark::none}, {0.13, Mark::none}, {0.13, Mark::none}, {0.1, Mark::none}, {0.0, Mark::none}, {0.18, Mark::none}, {0.1, Mark::none}, {0.31, Mark::none}, {0.11, Mark::none}, {0.33, Mark::none}}}},
    {"main", "S_OT", "cBOIN", {{{0.16, Mark::none}, {0.21, Mark::none}, {0.15, Mark::none}, {0.17, Mark::none}, {0.0, Mark::none}, {0.19, Mark::none}, {0.13, Mark::none}, {0.21, Mark::none}, {0.13, Mark::none}, {0.31, Mark::none}}}},
    {"main", "S_OT", "cKeyboard", {{{0.17, Mark::none}, {0.21, Mark::none}, {0.14, Mark::none}, {0.17, Mark::none}, {0.0, Mark::none}, {0.2, Mark::none}, {0.14, Mark::none}, {0.21, Mark::none}, {0.12, Mark::none}, {0.31, Mark::none}}}},
    {"main", "S_OT", "bCRM", {{{0.08, Mark::best}, {0.22, Mark::none}, {0.05, Mark::best}, {0.24, Mark::worst}, {0.0, Mark::none}, {0.11, Mark::best}, {0.15, Mark::none}, {0.2, Mark::none}, {0.2, Mark::none}, {0.38, Mark::none}}}},
    {"main", "A_C", "I2D", {{{0.38, Mark::none}, {0.57, Mark::best}, {0.45, Mark::none}, {0.71, Mark::none}, {0.58, Mark::none}, {0.23, Mark::none}, {0.5, Mark::none}, {0.07, Mark::worst}, {0.05, Mark::worst}, {0.33, Mark::none}}}},
    {"main", "A_C", "Copula", {{{0.33, Mark::none}, {0.57, Mark::best}, {0.31, Mark::worst}, {0.72, Mark::none}, {0.46, Mark::none}, {0.29, Mark::none}, {0.41, Mark::none}, {0.12, Mark::none}, {0.31, Mark::none}, {0.09, Mark::worst}}}},
    {"main", "A_C", "Hierarchy.1", {{{0.42, Mark::none}, {0.48, Mark::none}, {0.43, Mark::none}, {0.59, Mark::none}, {0.68, Mark::none}, {0.31, Mark::none}, {0.35, Mark::worst}, {0.21, Mark::none}, {0.3, Mark::none}, {0.35, Mark::none}}}},
    {"main", "A_C", "POCRM", {{{0.53, Mark::best}, {0.53, Mark::none}, {0.47, Mark::none}, {0.64, Mark::none}, {0.33, Mark::worst}, {0.37, Mark::none}, {0.43, Mark::none}, {0.35, Mark::best}, {0.3, Mark::none}, {0.36, Mark::none}}}},
    {"main", "A_C", "DFCOMB", {{{0.23, Mark::worst}, {0.45, Mark::none}, {0.37, Mark::none}, {0.91, Mark::best}, {0.39, Mark::none}, {0.16, Mark::worst}, {0.33, Mark::worst}, {0.23, Mark::none}, {0.13, Mark::worst}, {0.16, Mark::worst}}}},
    {"main", "A_C", "gCRM.1", {{{0.46, Mark::none}, {0.45, Mark::none}, {0.49, Mark::none}, {0.75, Mark::none}, {0.69, Mark::none}, {0.36, Mark::none}, {0.46, Mark::none}, {0.27, Mark::none}, {0.29, Mark::none}, {0.36, Mark::none}}}},
    {"main", "A_C", "cBOIN", {{{0.43, Mark::none}, {0.49, Mark::none}, {0.4, Mark::none}, {0.72, Mark::none}, {0.43, Mark::none}, {0.34, Mark::none}, {0.46, Mark::none}, {0.21, Mark::none}, {0.26, Mark::none}, {0.2, Mark::none}}}},
    {"main", "A_C", "cKeyboard", {{{0.42, Mark::none}, {0.49, Mark::none}, {0.4, Mark::none}, {0.72, Mark::none}, {0.43, Mark::none}, {0.33, Mark::none}, {0.44, Mark::none}, {0.21, Mark::none}, {0.25, Mark::none}, {0.2, Mark::none}}}},
    {"main", "A_C", "bCRM", {{{0.41, Mark::none}, {0.51, Mark::none}, {0.36, Mark::none}, {0.67, Mark::none}, {0.24, Mark::worst}, {0.24, Mark::none}, {0.32, Mark::worst}, {0.23, Mark::none}, {0.15, Mark::worst}, {0.22, Mark::none}}}},
    {"main", "A_OT", "I2D", {{{0.29, Mark::none}, {0.27, Mark::none}, {0.19, Mark::none}, {0.29, Mark::none}, {0.0, Mark::none}, {0.27, Mark::none}, {0.16, Mark::none}, {0.37, Mark::none}, {0.35, Mark::worst}, {0.31, Mark::none}}}},
    {"main", "A_OT", "Copula", {{{0.17, Mark::none}, {0.13, Mark::none}, {0.19, Mark::none}, {0.28, Mark::none}, {0.0, Mark::none}, {0.18, Mark::none}, {0.13, Mark::none}, {0.31, Mark::none}, {0.23, Mark::none}, {0.41, Mark::none}}}},
    {"main", "A_OT", "Hierarchy.1", {{{0.34, Mark::worst}, {0.31, Mark::none}, {0.31, Mark::worst}, {0.28, Mark::none}, {0.0, Mark::none}, {0.36, Mark::worst}, {0.35, Mark::worst}, {0.4, Mark::none}, {0.29, Mark::none}, {0.38, Mark::none}}}},
    {"main", "A_OT", "POCRM", {{{0.16, Mark::none}, {0.32, Mark::none}, {0.11, Mark::best}, {0.36, Mark::none}, {0.0, Mark::none}, {0.15, Mark::none}, {0.24, Mark::none}, {0.24, Mark::none}, {0.21, Mark::none}, {0.38, Mark::none}}}},
    {"main", "A_OT", "DFCOMB", {{{0.11, Mark::best}, {0.05, Mark::best}, {0.14, Mark::none}, {0.09, Mark::best}, {0.0, Mark::none}, {0.14, Mark::none}, {0.08, Mark::best}, {0.23, Mark::none}, {0.25, Mark::none}, {0.23, Mark::none}}}},
    {"main", "A_OT", "gCRM.1", {{{0.27, Mark::none}, {0.27, Mark::none}, {0.24, Mark::none}, {0.25, Mark::none}, {0.0, Mark::none}, {0.29, Mark::none}, {0.21, Mark::none}, {0.34, Mark::none}, {0.23, Mark::none}, {0.42, Mark::none}}}},
    {"main", "A_OT", "cBOIN", {{{0.2, Mark::none}, {0.27, Mark::none}, {0.18, Mark::none}, {0.28, Mark::none}, {0.0, Mark::none}, {0.22, Mark::none}, {0.2, Mark::none}, {0.27, Mark::none}, {0.21, Mark::none}, {0.39, Mark::none}}}},
    {"main", "A_OT", "cKeyboard", {{{0.2, Mark::none}, {0.27, Mark::none}, {0.17, Mark::none}, {0.28, Mark::none}, {0.0, Mark::none}, {0.22, Mark::none}, {0.21, Mark::none}, {0.27, Mark::none}, {0.2, Mark::none}, {0.38, Mark::none}}}},
    {"main", "A_OT", "bCRM", {{{0.13, Mark::none}, {0.28, Mark::none}, {0.06, Mark::best}, {0.33, Mark::none}, {0.0, Mark::none}, {0.12, Mark::best}, {0.19, Mark::none}, {0.25, Mark::none}, {0.19, Mark::none}, {0.35, Mark::none}}}},
    {"early-stop", "S_C", "POCRM", {{{0.61, Mark::best}, {0.5, Mark::none}, {0.58, Mark::none}, {0.7, Mark::none}, {0.43, Mark::none}, {0.45, Mark::none}, {0.49, Mark::none}, {0.44, Mark::best}, {0.39, Mark::none}, {0.4, Mark::best}}}},
    {"early-stop", "S_C", "DFCOMB", {{{0.27, Mark::worst}, {0.21, Mark::worst}, {0.5, Mark::none}, {0.79, Mark::best}, {0.46, Mark::none}, {0.24, Mark::worst}, {0.41, Mark::worst}, {0.27, Mark::none}, {0.14, Mark::worst}, {0.19, Mark::worst}}}},
    {"early-stop", "S_C", "cBOIN", {{{0.56, Mark::none}, {0.56, Mark::none}, {0.57, Mark::none}, {0.63, Mark::none}, {0.63, Mark::best}, {0.47, Mark::none}, {0.62, Mark::best}, {0.32, Mark::none}, {0.36, Mark::none}, {0.35, Mark::none}}}},
    {"early-stop", "S_C", "cKeyboard", {{{0.5, Mark::none}, {0.51, Mark::none}, {0.54, Mark::none}, {0.61, Mark::none}, {0.6, Mark::best}, {0.41, Mark::none}, {0.54, Mark::none}, {0.27, Mark::none}, {0.33, Mark::none}, {0.22, Mark::none}}}},
    {"early-stop", "S_OT", "POCRM", {{{0.17, Mark::none}, {0.34, Mark::worst}, {0.09, Mark::best}, {0.31, Mark::none}, {0.0, Mark::none}, {0.15, Mark::none}, {0.22, Mark::none}, {0.23, Mark::none}, {0.21, Mark::none}, {0.38, Mark::none}}}},
    {"early-stop", "S_OT", "DFCOMB", {{{0.1, Mark::best}, {0.02, Mark::best}, {0.14, Mark::none}, {0.02, Mark::best}, {0.0, Mark::none}, {0.13, Mark::none}, {0.03, Mark::best}, {0.2, Mark::none}, {0.25, Mark::none}, {0.12, Mark::best}}}},
    {"early-stop", "S_OT", "cBOIN", {{{0.2, Mark::none}, {0.25, Mark::none}, {0.17, Mark::none}, {0.24, Mark::none}, {0.0, Mark::none}, {0.22, Mark::none}, {0.18, Mark::none}, {0.26, Mark::none}, {0.18, Mark::none}, {0.4, Mark::none}}}},
    {"early-stop", "S_OT", "cKeyboard", {{{0.21, Mark::none}, {0.24, Mark::none}, {0.18, Mark::none}, {0.25, Mark::none}, {0.0, Mark::none}, {0.24, Mark::none}, {0.2, Mark::none}, {0.29, Mark::none}, {0.24, Mark::none}, {0.46, Mark::none}}}},
    {"early-stop", "A_C", "POCRM", {{{0.41, Mark::best}, {0.39, Mark::none}, {0.34, Mark::none}, {0.56, Mark::worst}, {0.19, Mark::none}, {0.26, Mark::none}, {0.36, Mark::none}, {0.22, Mark::best}, {0.2, Mark::none}, {0.23, Mark::best}}}},
    {"early-stop", "A_C", "DFCOMB", {{{0.15, Mark::worst}, {0.24, Mark::worst}, {0.29, Mark::none}, {0.93, Mark::best}, {0.26, Mark::none}, {0.12, Mark::worst}, {0.22, Mark::worst}, {0.14, Mark::none}, {0.12, Mark::none}, {0.07, Mark::worst}}}},
    {"early-stop", "A_C", "cBOIN", {{{0.31, Mark::none}, {0.4, Mark::none}, {0.28, Mark::none}, {0.69, Mark::none}, {0.26, Mark::none}, {0.24, Mark::none}, {0.34, Mark::none}, {0.15, Mark::none}, {0.19, Mark::none}, {0.14, Mark::none}}}},
    {"early-stop", "A_C", "cKeyboard", {{{0.29, Mark::none}, {0.39, Mark::none}, {0.27, Mark::none}, {0.69, Mark::none}, {0.25, Mark::none}, {0.22, Mark::none}, {0.31, Mark::none}, {0.14, Mark::none}, {0.18, Mark::none}, {0.1, Mark::none}}}},
    {"early-stop", "A_OT", "POCRM", {{{0.16, Mark::none}, {0.42, Mark::worst}, {0.09, Mark::none}, {0.44, Mark::worst}, {0.0, Mark::none}, {0.13, Mark::none}, {0.22, Mark::none}, {0.26, Mark::none}, {0.19, Mark::none}, {0.43, Mark::none}}}},
    {"early-stop", "A_OT", "DFCOMB", {{{0.09, Mark::best}, {0.03, Mark::best}, {0.13, Mark::none}, {0.07, Mark::best}, {0.0, Mark::none}, {0.11, Mark::none}, {0.06, Mark::best}, {0.23, Mark::none}, {0.27, Mark::none}, {0.22, Mark::best}}}},
    {"early-stop", "A_OT", "cBOIN", {{{0.18, Mark::none}, {0.26, Mark::none}, {0.15, Mark::none}, {0.31, Mark::none}, {0.0, Mark::none}, {0.2, Mark::none}, {0.2, Mark::none}, {0.26, Mark::none}, {0.21, Mark::none}, {0.4, Mark::none}}}},
    {"early-stop", "A_OT", "cKeyboard", {{{0.17, Mark::none}, {0.24, Mark::none}, {0.14, Mark::none}, {0.31, Mark::none}, {0.0, Mark::none}, {0.19, Mark::none}, {0.2, Mark::none}, {0.25, Mark::none}, {0.21, Mark::none}, {0.43, Mark::none}}}},
  };
  return rows;
}

}  // namespace combo::report
