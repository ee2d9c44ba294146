#pragma once

#include <string>

#include <gsvm/modelsel.hpp>

namespace gsvm {

/// Accuracy table: one row, per-iteration percentages then the average.
std::string format_accuracy_table(const EvalReport& report, const std::string& row_label);

/// Per-class table: class id, test count, errors, error rate.
std::string format_class_error_table(const EvalReport& report);

/// `true\pred,<ids...>` followed by one row per true class.
std::string format_confusion_csv(const EvalReport& report);

/// `C,param,accuracy` in scan order.
std::string format_grid_csv(const GridSearchReport& report);

/// Human-readable surface summary including failed cells and the optimum.
std::string format_grid_summary(const GridSearchReport& report);

}  // namespace gsvm
