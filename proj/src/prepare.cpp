#include "fairaudit/prepare.hpp"

#include "fairaudit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fairaudit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

std::string normalize_column(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : trim(name)) {
        if (c == '.' || c == '_') out.push_back('-');
        else out.push_back(char(std::tolower((unsigned char)c)));
    }
    return out;
}

double parse_numeric(const std::string& cell, const std::string& column,
                     std::size_t row_1based) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw DataError("prepare: row " + std::to_string(row_1based) +
                        ": cannot parse '" + cell + "' in column '" + column + "'");
    return v;
}

struct SourceColumn {
    std::string name;
    std::size_t index; // into the raw table
    bool numeric;
};

/// Encode kept rows: numeric source columns pass through, categorical ones
/// expand to one indicator per category (categories sorted, names "col=cat").
Prepared encode(const RawTable& raw, const std::vector<std::size_t>& kept,
                const std::vector<SourceColumn>& sources,
                std::vector<std::uint8_t> labels, std::vector<std::uint8_t> privileged,
                std::string provenance) {
    // category discovery
    std::vector<std::vector<std::string>> categories(sources.size());
    for (std::size_t s = 0; s < sources.size(); ++s) {
        if (sources[s].numeric) continue;
        std::set<std::string> seen;
        for (std::size_t r : kept) seen.insert(trim(raw.rows[r][sources[s].index]));
        categories[s].assign(seen.begin(), seen.end());
    }

    // feature layout in source order
    std::vector<std::string> names;
    std::vector<std::size_t> numeric_cols;
    std::vector<std::size_t> offsets(sources.size());
    for (std::size_t s = 0; s < sources.size(); ++s) {
        offsets[s] = names.size();
        if (sources[s].numeric) {
            numeric_cols.push_back(names.size());
            names.push_back(sources[s].name);
        } else {
            for (const std::string& cat : categories[s])
                names.push_back(sources[s].name + "=" + cat);
        }
    }

    Prepared out;
    out.numeric_columns = numeric_cols;
    Dataset& ds = out.data;
    ds.features = Matrix(kept.size(), names.size());
    ds.feature_names = names;
    ds.labels = std::move(labels);
    ds.privileged = std::move(privileged);
    ds.weights.assign(kept.size(), 1.0);
    ds.provenance = std::move(provenance);

    for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::vector<std::string>& row = raw.rows[kept[i]];
        for (std::size_t s = 0; s < sources.size(); ++s) {
            std::string cell = trim(row[sources[s].index]);
            if (sources[s].numeric) {
                ds.features.at(i, offsets[s]) =
                    parse_numeric(cell, sources[s].name, kept[i] + 1);
            } else {
                const std::vector<std::string>& cats = categories[s];
                std::size_t pos = std::size_t(
                    std::lower_bound(cats.begin(), cats.end(), cell) - cats.begin());
                ds.features.at(i, offsets[s] + pos) = 1.0;
            }
        }
    }
    ds.validate();
    return out;
}

std::size_t require_column(const RawTable& raw, const std::string& normalized,
                           const char* dataset) {
    for (std::size_t c = 0; c < raw.columns.size(); ++c)
        if (normalize_column(raw.columns[c]) == normalized) return c;
    throw DataError(std::string(dataset) + ": missing column '" + normalized + "'");
}

} // namespace

const char* protected_slug(ProtectedAttr attr) {
    return attr == ProtectedAttr::race ? "race" : "sex";
}

std::vector<std::size_t> numeric_columns_by_name(const Dataset& ds) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < ds.feature_names.size(); ++j)
        if (ds.feature_names[j].find('=') == std::string::npos) out.push_back(j);
    return out;
}

Standardizer Standardizer::fit(const Dataset& ds, const std::vector<std::size_t>& columns) {
    Standardizer st;
    st.columns = columns;
    st.mean.reserve(columns.size());
    st.stdev.reserve(columns.size());
    for (std::size_t col : columns) {
        if (col >= ds.dim()) throw DataError("standardize: column out of range");
        double sum = 0.0;
        for (std::size_t i = 0; i < ds.n(); ++i) sum += ds.features.at(i, col);
        double mean = sum / double(ds.n());
        double ss = 0.0;
        for (std::size_t i = 0; i < ds.n(); ++i) {
            double c = ds.features.at(i, col) - mean;
            ss += c * c;
        }
        double sd = std::sqrt(ss / double(ds.n()));
        st.mean.push_back(mean);
        st.stdev.push_back(sd > 0.0 ? sd : 1.0);
    }
    return st;
}

void Standardizer::apply(Dataset& ds) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        std::size_t col = columns[c];
        if (col >= ds.dim()) throw DataError("standardize: column out of range");
        for (std::size_t i = 0; i < ds.n(); ++i)
            ds.features.at(i, col) = (ds.features.at(i, col) - mean[c]) / stdev[c];
    }
}

RawTable load_adult_table(const std::vector<std::string>& paths) {
    static const char* canonical[15] = {
        "age", "workclass", "fnlwgt", "education", "education-num",
        "marital-status", "occupation", "relationship", "race", "sex",
        "capital-gain", "capital-loss", "hours-per-week", "native-country",
        "income"};
    if (paths.empty()) throw UsageError("load_adult_table: no input files");

    RawTable table;
    table.columns.assign(canonical, canonical + 15);

    for (const std::string& path : paths) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open '" + path + "'");
        std::ostringstream kept;
        std::string line;
        bool first_kept = true;
        bool has_header = false;
        while (std::getline(in, line)) {
            std::string t = trim(line);
            if (t.empty() || t[0] == '|') continue;
            if (first_kept) {
                // headerless files start with the integer age column
                char* end = nullptr;
                std::strtol(t.c_str(), &end, 10);
                has_header = (end == t.c_str() || *end != ',');
                first_kept = false;
            }
            kept << line << "\n";
        }
        std::istringstream src(kept.str());
        RawTable part = parse_csv(src, has_header);
        if (part.columns.size() != 15)
            throw DataError("'" + path + "': expected 15 columns, got " +
                            std::to_string(part.columns.size()));
        if (has_header) {
            for (std::size_t c = 0; c < 15; ++c) {
                std::string norm = normalize_column(part.columns[c]);
                // tolerate alternate names for the label column
                if (c == 14 && (norm == "class" || norm == "salary" || norm == "target"))
                    norm = "income";
                if (norm != canonical[c])
                    throw DataError("'" + path + "': unexpected column '" +
                                    part.columns[c] + "' (wanted '" + canonical[c] + "')");
            }
        }
        for (std::vector<std::string>& row : part.rows) {
            for (std::string& cell : row) cell = trim(cell);
            // test-set files carry a trailing period on the label
            std::string& income = row[14];
            if (!income.empty() && income.back() == '.') income.pop_back();
            table.rows.push_back(std::move(row));
        }
    }
    if (table.rows.empty()) throw DataError("adult: no data rows found");
    return table;
}

RawTable load_compas_table(const std::string& path) { return load_csv(path, true); }

Prepared prepare_adult(const RawTable& raw, ProtectedAttr attr,
                       const PrepareOptions& options) {
    struct Col { const char* name; bool numeric; };
    static const Col cols[14] = {
        {"age", true},         {"workclass", false},    {"fnlwgt", true},
        {"education", false},  {"education-num", true}, {"marital-status", false},
        {"occupation", false}, {"relationship", false}, {"race", false},
        {"sex", false},        {"capital-gain", true},  {"capital-loss", true},
        {"hours-per-week", true}, {"native-country", false}};

    std::vector<SourceColumn> sources;
    sources.reserve(14);
    for (const Col& c : cols)
        sources.push_back({c.name, require_column(raw, c.name, "adult"), c.numeric});
    std::size_t income_col = require_column(raw, "income", "adult");
    std::size_t race_col = sources[8].index, sex_col = sources[9].index;

    std::vector<std::size_t> kept;
    std::vector<std::uint8_t> labels, privileged;
    for (std::size_t r = 0; r < raw.row_count(); ++r) {
        const std::vector<std::string>& row = raw.rows[r];
        bool missing = false;
        for (const SourceColumn& s : sources)
            if (trim(row[s.index]) == "?") { missing = true; break; }
        if (missing || trim(row[income_col]) == "?") continue;

        std::string income = trim(row[income_col]);
        if (!income.empty() && income.back() == '.') income.pop_back();
        std::uint8_t label;
        if (income == ">50K") label = 1;
        else if (income == "<=50K") label = 0;
        else
            throw DataError("adult: row " + std::to_string(r + 1) +
                            ": unrecognized income value '" + income + "'");

        std::string group = trim(row[attr == ProtectedAttr::race ? race_col : sex_col]);
        std::uint8_t priv = attr == ProtectedAttr::race ? (group == "White" ? 1 : 0)
                                                        : (group == "Male" ? 1 : 0);
        kept.push_back(r);
        labels.push_back(label);
        privileged.push_back(priv);
    }
    if (kept.empty()) throw DataError("adult: no usable rows after filtering");

    Prepared out = encode(raw, kept, sources, std::move(labels), std::move(privileged),
                          std::string("adult/") + protected_slug(attr));
    if (options.standardize)
        Standardizer::fit(out.data, out.numeric_columns).apply(out.data);
    return out;
}

Prepared prepare_compas(const RawTable& raw, ProtectedAttr attr,
                        const PrepareOptions& options) {
    struct Col { const char* name; bool numeric; };
    static const Col cols[9] = {
        {"sex", false},           {"age", true},         {"age-cat", false},
        {"race", false},          {"juv-fel-count", true}, {"juv-misd-count", true},
        {"juv-other-count", true}, {"priors-count", true}, {"c-charge-degree", false}};

    std::vector<SourceColumn> sources;
    sources.reserve(9);
    for (const Col& c : cols) {
        std::size_t idx = require_column(raw, c.name, "compas");
        // feature names keep the source spelling (underscores)
        std::string name = c.name;
        std::replace(name.begin(), name.end(), '-', '_');
        sources.push_back({name, idx, c.numeric});
    }
    std::size_t days_col = require_column(raw, "days-b-screening-arrest", "compas");
    std::size_t recid_col = require_column(raw, "is-recid", "compas");
    std::size_t score_col = require_column(raw, "score-text", "compas");
    std::size_t label_col = require_column(raw, "two-year-recid", "compas");
    std::size_t race_col = sources[3].index, sex_col = sources[0].index;

    std::vector<std::size_t> kept;
    std::vector<std::uint8_t> labels, privileged;
    for (std::size_t r = 0; r < raw.row_count(); ++r) {
        const std::vector<std::string>& row = raw.rows[r];

        // the standard filter for this dataset
        std::string days = trim(row[days_col]);
        if (days.empty()) continue;
        double days_v = parse_numeric(days, "days_b_screening_arrest", r + 1);
        if (days_v < -30.0 || days_v > 30.0) continue;
        if (trim(row[recid_col]) == "-1") continue;
        if (trim(row[label_col]) == "-1") continue;
        if (trim(row[score_col]) == "N/A") continue;
        std::string degree = trim(row[sources[8].index]);
        if (degree == "O") continue;

        bool missing = false;
        for (const SourceColumn& s : sources)
            if (trim(row[s.index]).empty()) { missing = true; break; }
        if (missing) continue;

        std::string recid = trim(row[label_col]);
        std::uint8_t label;
        if (recid == "0") label = 1; // favorable: no recidivism within two years
        else if (recid == "1") label = 0;
        else
            throw DataError("compas: row " + std::to_string(r + 1) +
                            ": unrecognized two_year_recid value '" + recid + "'");

        std::string group = trim(row[attr == ProtectedAttr::race ? race_col : sex_col]);
        std::uint8_t priv = attr == ProtectedAttr::race ? (group == "Caucasian" ? 1 : 0)
                                                        : (group == "Female" ? 1 : 0);
        kept.push_back(r);
        labels.push_back(label);
        privileged.push_back(priv);
    }
    if (kept.empty()) throw DataError("compas: no usable rows after filtering");

    Prepared out = encode(raw, kept, sources, std::move(labels), std::move(privileged),
                          std::string("compas/") + protected_slug(attr));
    if (options.standardize)
        Standardizer::fit(out.data, out.numeric_columns).apply(out.data);
    return out;
}

} // namespace fairaudit
