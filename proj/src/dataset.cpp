#include "fairaudit/dataset.hpp"

#include "fairaudit/csv.hpp"
#include "fairaudit/errors.hpp"
#include "fairaudit/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fairaudit {

void Dataset::validate() const {
    const std::size_t rows = labels.size();
    if (features.rows != rows || privileged.size() != rows || weights.size() != rows)
        throw DataError("dataset: features/labels/protected/weights length mismatch");
    if (feature_names.size() != features.cols)
        throw DataError("dataset: feature_names length does not match feature count");
    for (std::size_t i = 0; i < rows; ++i) {
        if (labels[i] > 1) throw DataError("dataset: non-binary label");
        if (privileged[i] > 1) throw DataError("dataset: non-binary protected value");
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw DataError("dataset: weight must be positive and finite");
    }
}

Dataset Dataset::select(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.features = Matrix(indices.size(), features.cols);
    out.labels.reserve(indices.size());
    out.privileged.reserve(indices.size());
    out.weights.reserve(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const std::size_t i = indices[k];
        auto src = features.row(i);
        auto dst = out.features.row(k);
        std::copy(src.begin(), src.end(), dst.begin());
        out.labels.push_back(labels[i]);
        out.privileged.push_back(privileged[i]);
        out.weights.push_back(weights[i]);
    }
    out.feature_names = feature_names;
    out.provenance = provenance;
    return out;
}

GroupCounts count_groups(const Dataset& ds) {
    GroupCounts c;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const bool pos = ds.labels[i] == 1;
        const bool priv = ds.privileged[i] == 1;
        if (priv) {
            ++c.n_p;
            pos ? ++c.n_pp : ++c.n_np;
        } else {
            ++c.n_up;
            pos ? ++c.n_pup : ++c.n_nup;
        }
        pos ? ++c.n_pos : ++c.n_neg;
        ++c.n_total;
    }
    return c;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction,
                                  std::uint64_t seed) {
    const std::size_t n = ds.n();
    if (n < 2) throw DataError("split: need at least 2 rows");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DataError("split: test_fraction must be in (0,1)");

    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * test_fraction));
    if (n_test == 0 || n_test >= n) {
        std::ostringstream msg;
        msg << "split: fraction " << test_fraction << " on n=" << n
            << " produces an empty part";
        throw DataError(msg.str());
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, 0x5911f7ULL));
    rng.shuffle(order);

    std::vector<std::size_t> test_idx(order.begin(), order.begin() + n_test);
    std::vector<std::size_t> train_idx(order.begin() + n_test, order.end());

    Dataset train = ds.select(train_idx);
    Dataset test = ds.select(test_idx);
    if (!ds.provenance.empty()) {
        train.provenance = ds.provenance + "/train";
        test.provenance = ds.provenance + "/test";
    }
    return {std::move(train), std::move(test)};
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(std::string("dataset csv: bad ") + what + " value '" + s + "'");
    }
}

} // namespace

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("dataset csv: cannot open " + path + " for writing");
    for (const auto& name : ds.feature_names) out << csv_escape(name) << ',';
    out << "label,protected,weight\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        auto row = ds.features.row(i);
        for (double v : row) out << format_double(v) << ',';
        out << int(ds.labels[i]) << ',' << int(ds.privileged[i]) << ','
            << format_double(ds.weights[i]) << '\n';
    }
    if (!out) throw DataError("dataset csv: write failed for " + path);
}

Dataset read_dataset_csv(const std::string& path) {
    RawTable table = load_csv(path, /*has_header=*/true);
    const std::size_t ncols = table.columns.size();
    if (ncols < 3 || table.columns[ncols - 3] != "label" ||
        table.columns[ncols - 2] != "protected" || table.columns[ncols - 1] != "weight")
        throw DataError("dataset csv: expected trailing label,protected,weight columns");

    const std::size_t d = ncols - 3;
    Dataset ds;
    ds.feature_names.assign(table.columns.begin(), table.columns.begin() + d);
    ds.features = Matrix(table.row_count(), d);
    ds.labels.reserve(table.row_count());
    ds.privileged.reserve(table.row_count());
    ds.weights.reserve(table.row_count());
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        const auto& row = table.rows[i];
        for (std::size_t j = 0; j < d; ++j)
            ds.features.at(i, j) = parse_double(row[j], "feature");
        const std::string& lab = row[d];
        const std::string& prot = row[d + 1];
        if (lab != "0" && lab != "1")
            throw DataError("dataset csv: label must be 0 or 1, got '" + lab + "'");
        if (prot != "0" && prot != "1")
            throw DataError("dataset csv: protected must be 0 or 1, got '" + prot + "'");
        ds.labels.push_back(lab == "1");
        ds.privileged.push_back(prot == "1");
        ds.weights.push_back(parse_double(row[d + 2], "weight"));
    }
    ds.validate();
    return ds;
}

} // namespace fairaudit
