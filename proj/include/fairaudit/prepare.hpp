#ifndef FAIRAUDIT_PREPARE_HPP
#define FAIRAUDIT_PREPARE_HPP

#include "fairaudit/csv.hpp"
#include "fairaudit/dataset.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fairaudit {

enum class ProtectedAttr { race, sex };

const char* protected_slug(ProtectedAttr attr);

struct PrepareOptions {
    /// Standardize numeric columns in place using the prepared data's own
    /// mean and standard deviation. Turn this off when a train/test split
    /// follows, and standardize from the training split instead.
    bool standardize = true;
};

struct Prepared {
    Dataset data;
    /// Feature-column indices that came from numeric source columns (the
    /// remaining columns are one-hot indicators and are left unscaled).
    std::vector<std::size_t> numeric_columns;
};

/// Census-income table -> audit dataset. Favorable label: income above 50K.
/// Privileged group: race=White or sex=Male. Rows with a "?" cell are
/// dropped; categorical columns are one-hot encoded with lexicographically
/// ordered categories and feature names like "workclass=Private".
/// Throws DataError when a required column is missing or a numeric cell does
/// not parse.
Prepared prepare_adult(const RawTable& raw, ProtectedAttr attr,
                       const PrepareOptions& options = {});

/// Recidivism-score table -> audit dataset. Favorable label: no two-year
/// recidivism. Privileged group: race=Caucasian or sex=Female. Applies the
/// standard filter: screening within 30 days of arrest, recorded recidivism
/// flag, non-ordinary-traffic charge, and a scored assessment.
Prepared prepare_compas(const RawTable& raw, ProtectedAttr attr,
                        const PrepareOptions& options = {});

/// Column means / standard deviations fitted on one dataset and applied to
/// others (e.g. fit on the training split, apply to both splits).
struct Standardizer {
    std::vector<std::size_t> columns;
    std::vector<double> mean;
    std::vector<double> stdev; // constant columns get 1.0 so they pass through

    static Standardizer fit(const Dataset& ds, const std::vector<std::size_t>& columns);
    void apply(Dataset& ds) const;
};

/// Feature columns that look numeric by name: prepared datasets name one-hot
/// columns "source=category", so anything without '=' is a numeric source.
std::vector<std::size_t> numeric_columns_by_name(const Dataset& ds);

/// Load one or more raw census-income files and concatenate their rows.
/// Accepts both headered CSVs and the classic headerless comma+space format;
/// skips comment banners ('|' lines) and blank lines; trims cell whitespace
/// and trailing periods on the income column.
RawTable load_adult_table(const std::vector<std::string>& paths);

/// Load a raw recidivism-score CSV (headered).
RawTable load_compas_table(const std::string& path);

} // namespace fairaudit

#endif
