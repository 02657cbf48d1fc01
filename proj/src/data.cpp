#include "advens/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "advens/common.hpp"

namespace advens {

namespace {

std::string kind_name(ColumnKind kind) {
    return kind == ColumnKind::Numeric ? "numeric" : "categorical";
}

ColumnKind kind_from_name(const std::string& name) {
    if (name == "numeric") return ColumnKind::Numeric;
    if (name == "categorical") return ColumnKind::Categorical;
    throw ConfigError("unknown column kind '" + name + "'");
}

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
    return out;
}

IntVector gather_labels(const IntVector& y, const std::vector<std::size_t>& idx) {
    IntVector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(idx[i])];
    return out;
}

std::map<int, std::vector<std::size_t>> rows_by_class(const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    return groups;
}

std::vector<std::string> layout_names(const std::vector<EncodedColumn>& layout) {
    std::vector<std::string> names;
    names.reserve(layout.size());
    for (const auto& col : layout) names.push_back(col.name);
    return names;
}

}  // namespace

void write_matrix_csv(const std::string& path, const std::vector<std::string>& column_names,
                      const Matrix& x, const IntVector& y) {
    if (x.rows() != y.size()) throw ShapeError("feature/label row count mismatch");
    if (static_cast<std::size_t>(x.cols()) != column_names.size())
        throw ShapeError("feature/header column count mismatch");
    std::string text;
    for (const auto& name : column_names) {
        text += csv_field(name);
        text += ',';
    }
    text += "label\n";
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            text += double_to_string(x(r, c));
            text += ',';
        }
        text += std::to_string(y[r]);
        text += '\n';
    }
    write_text_file(path, text);
}

std::pair<Matrix, IntVector> read_matrix_csv(const std::string& path, std::size_t n_cols) {
    const auto records = parse_csv(read_text_file(path));
    if (records.empty()) throw DataError("empty feature file: " + path);
    if (records.front().size() != n_cols + 1)
        throw DataError("feature column count mismatch in " + path);
    const std::size_t n = records.size() - 1;
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_cols));
    IntVector y(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = records[r + 1];
        if (rec.size() != n_cols + 1)
            throw DataError("ragged row " + std::to_string(r + 2) + " in " + path);
        for (std::size_t c = 0; c < n_cols; ++c) {
            double v = 0.0;
            if (!parse_double(rec[c], &v))
                throw DataError("bad numeric value '" + rec[c] + "' in " + path);
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
        const std::string& lab = rec[n_cols];
        if (lab != "0" && lab != "1")
            throw DataError("bad label '" + lab + "' in " + path);
        y[static_cast<Eigen::Index>(r)] = lab == "1" ? 1 : 0;
    }
    return {std::move(x), std::move(y)};
}

void FeatureSchema::validate() const {
    if (columns.empty()) throw ConfigError("schema has no feature columns");
    std::set<std::string> seen;
    for (const auto& col : columns) {
        if (col.name.empty()) throw ConfigError("schema column with empty name");
        if (!seen.insert(col.name).second)
            throw ConfigError("duplicate schema column '" + col.name + "'");
        if (col.kind == ColumnKind::Numeric && !col.vocab.empty())
            throw ConfigError("numeric column '" + col.name + "' declares a vocabulary");
    }
    if (label_column.empty()) throw ConfigError("schema is missing the label column name");
    if (seen.count(label_column))
        throw ConfigError("label column '" + label_column + "' also listed as a feature");
    if (use_negative) {
        if (negative_label.empty()) throw ConfigError("negative label mapping selected but empty");
        if (!positive_label.empty())
            throw ConfigError("schema sets both positive and negative label values");
    } else if (positive_label.empty()) {
        throw ConfigError("schema is missing the positive label value");
    }
    for (const auto& name : ignored_columns)
        if (seen.count(name) || name == label_column)
            throw ConfigError("ignored column '" + name + "' is also used by the schema");
}

int FeatureSchema::label_of(const std::string& value) const {
    if (use_negative) return value == negative_label ? 0 : 1;
    return value == positive_label ? 1 : 0;
}

json FeatureSchema::to_json() const {
    json cols = json::array();
    for (const auto& col : columns) {
        json c{{"name", col.name}, {"kind", kind_name(col.kind)}};
        if (!col.vocab.empty()) c["vocab"] = col.vocab;
        cols.push_back(std::move(c));
    }
    json j{{"columns", std::move(cols)}, {"label_column", label_column}};
    if (use_negative)
        j["negative_label"] = negative_label;
    else
        j["positive_label"] = positive_label;
    if (!ignored_columns.empty()) j["ignored_columns"] = ignored_columns;
    return j;
}

FeatureSchema FeatureSchema::from_json(const json& j) {
    FeatureSchema s;
    for (const auto& c : j.at("columns")) {
        ColumnSpec col;
        col.name = c.at("name").get<std::string>();
        col.kind = kind_from_name(c.at("kind").get<std::string>());
        if (c.contains("vocab")) col.vocab = c.at("vocab").get<std::vector<std::string>>();
        s.columns.push_back(std::move(col));
    }
    s.label_column = j.at("label_column").get<std::string>();
    if (j.contains("negative_label")) {
        s.negative_label = j.at("negative_label").get<std::string>();
        s.use_negative = true;
    }
    if (j.contains("positive_label")) s.positive_label = j.at("positive_label").get<std::string>();
    if (j.contains("ignored_columns"))
        s.ignored_columns = j.at("ignored_columns").get<std::vector<std::string>>();
    s.validate();
    return s;
}

FeatureSchema FeatureSchema::load(const std::string& path) {
    return from_json(json::parse(read_text_file(path)));
}

void FeatureSchema::save(const std::string& path) const {
    write_text_file(path, to_json().dump(2) + "\n");
}

RawTable RawTable::with_schema(const FeatureSchema& schema) {
    schema.validate();
    RawTable t;
    t.schema = schema;
    for (const auto& col : schema.columns) {
        if (col.kind == ColumnKind::Numeric) {
            t.col_slot.push_back(static_cast<int>(t.numeric.size()));
            t.numeric.emplace_back();
        } else {
            t.col_slot.push_back(static_cast<int>(t.categorical.size()));
            t.categorical.emplace_back();
        }
    }
    return t;
}

RawTable RawTable::select(const std::vector<std::size_t>& idx) const {
    RawTable out = with_schema(schema);
    for (std::size_t i : idx)
        if (i >= rows()) throw ShapeError("row index " + std::to_string(i) + " out of range");
    for (auto& col : out.numeric) col.reserve(idx.size());
    for (std::size_t c = 0; c < numeric.size(); ++c)
        for (std::size_t i : idx) out.numeric[c].push_back(numeric[c][i]);
    for (std::size_t c = 0; c < categorical.size(); ++c)
        for (std::size_t i : idx) out.categorical[c].push_back(categorical[c][i]);
    for (std::size_t i : idx) {
        out.labels.push_back(labels[i]);
        if (label_values.size() == labels.size()) out.label_values.push_back(label_values[i]);
    }
    return out;
}

RawTable load_csv(const std::string& path, const FeatureSchema& schema) {
    const auto records = parse_csv(read_text_file(path));
    if (records.empty()) throw DataError("empty csv file: " + path);

    const auto& header = records.front();
    std::unordered_map<std::string, std::size_t> col_at;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!col_at.emplace(header[i], i).second)
            throw DataError("duplicate header column '" + header[i] + "' in " + path);
    }

    RawTable out = RawTable::with_schema(schema);
    std::vector<std::size_t> source(schema.columns.size());
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        const auto it = col_at.find(schema.columns[i].name);
        if (it == col_at.end())
            throw DataError("missing column '" + schema.columns[i].name + "' in " + path);
        source[i] = it->second;
    }
    const auto label_it = col_at.find(schema.label_column);
    if (label_it == col_at.end())
        throw DataError("missing label column '" + schema.label_column + "' in " + path);
    const std::size_t label_src = label_it->second;

    std::vector<double> nums(out.numeric.size());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        // record numbers are 1-based with the header as record 1
        if (rec.size() != header.size()) {
            out.rejected_rows.push_back(r + 1);
            continue;
        }
        bool ok = true;
        for (std::size_t i = 0; i < schema.columns.size() && ok; ++i)
            if (schema.columns[i].kind == ColumnKind::Numeric)
                ok = parse_double(rec[source[i]], &nums[static_cast<std::size_t>(out.col_slot[i])]);
        if (!ok) {
            out.rejected_rows.push_back(r + 1);
            continue;
        }
        for (std::size_t i = 0; i < schema.columns.size(); ++i) {
            const auto slot = static_cast<std::size_t>(out.col_slot[i]);
            if (schema.columns[i].kind == ColumnKind::Numeric)
                out.numeric[slot].push_back(nums[slot]);
            else
                out.categorical[slot].push_back(rec[source[i]]);
        }
        out.labels.push_back(schema.label_of(rec[label_src]));
        out.label_values.push_back(rec[label_src]);
    }
    return out;
}

void save_csv(const RawTable& table, const std::string& path) {
    if (table.label_values.size() != table.rows())
        throw DataError("table has no stored label values to write");
    std::string text;
    for (const auto& col : table.schema.columns) {
        text += csv_field(col.name);
        text += ',';
    }
    text += csv_field(table.schema.label_column);
    text += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t i = 0; i < table.schema.columns.size(); ++i) {
            const auto slot = static_cast<std::size_t>(table.col_slot[i]);
            if (table.schema.columns[i].kind == ColumnKind::Numeric)
                text += double_to_string(table.numeric[slot][r]);
            else
                text += csv_field(table.categorical[slot][r]);
            text += ',';
        }
        text += csv_field(table.label_values[r]);
        text += '\n';
    }
    write_text_file(path, text);
}

std::vector<std::size_t> sample_counts(const std::vector<std::size_t>& class_counts, double rate) {
    if (!(rate > 0.0 && rate <= 1.0))
        throw ConfigError("sampling rate must be in (0, 1], got " + double_to_string(rate));
    std::vector<std::size_t> out;
    out.reserve(class_counts.size());
    for (std::size_t count : class_counts) {
        const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(count)));
        out.push_back(std::min(k, count));
    }
    return out;
}

RawTable stratified_sample(const RawTable& table, double rate, std::uint64_t seed) {
    const auto groups = rows_by_class(table.labels);
    std::vector<std::size_t> keep;
    for (const auto& [label, rows] : groups) {
        const auto count = sample_counts({rows.size()}, rate).front();
        auto order = rows;
        Rng rng(seed_mix(seed, static_cast<std::uint64_t>(label)));
        rng.shuffle(order);
        keep.insert(keep.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    }
    std::sort(keep.begin(), keep.end());
    return table.select(keep);
}

PartitionIdx stratified_partition(const std::vector<int>& labels, std::uint64_t seed) {
    const auto groups = rows_by_class(labels);
    if (groups.empty()) throw DataError("cannot partition an empty table");
    PartitionIdx part;
    for (const auto& [label, rows] : groups) {
        if (rows.size() < 10)
            throw DataError("class " + std::to_string(label) + " has " +
                            std::to_string(rows.size()) + " rows; need at least 10");
        auto order = rows;
        Rng rng(seed_mix(seed, static_cast<std::uint64_t>(label)));
        rng.shuffle(order);
        const auto n_test =
            static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(order.size())));
        const std::size_t n_part1 = order.size() - n_test;
        const auto n_val = static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(n_part1)));
        part.test.insert(part.test.end(), order.begin(),
                         order.begin() + static_cast<std::ptrdiff_t>(n_test));
        part.val.insert(part.val.end(), order.begin() + static_cast<std::ptrdiff_t>(n_test),
                        order.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
        part.train.insert(part.train.end(),
                          order.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), order.end());
    }
    std::sort(part.train.begin(), part.train.end());
    std::sort(part.val.begin(), part.val.end());
    std::sort(part.test.begin(), part.test.end());
    return part;
}

SplitMatrices split(const Matrix& x, const IntVector& y, std::uint64_t seed) {
    if (x.rows() != y.size()) throw ShapeError("feature/label row count mismatch");
    std::vector<int> labels(y.data(), y.data() + y.size());
    const auto part = stratified_partition(labels, seed);
    SplitMatrices s;
    s.train_x = gather_rows(x, part.train);
    s.val_x = gather_rows(x, part.val);
    s.test_x = gather_rows(x, part.test);
    s.train_y = gather_labels(y, part.train);
    s.val_y = gather_labels(y, part.val);
    s.test_y = gather_labels(y, part.test);
    return s;
}

std::vector<int> FittedTransform::onehot_groups() const {
    std::vector<int> groups;
    groups.reserve(layout.size());
    for (const auto& col : layout) groups.push_back(col.group);
    return groups;
}

Matrix FittedTransform::apply(const RawTable& table) const {
    if (table.schema.columns.size() != schema.columns.size())
        throw ShapeError("table schema does not match the fitted transform");
    for (std::size_t i = 0; i < schema.columns.size(); ++i)
        if (table.schema.columns[i].name != schema.columns[i].name ||
            table.schema.columns[i].kind != schema.columns[i].kind)
            throw ShapeError("table column '" + table.schema.columns[i].name +
                             "' does not match the fitted transform");

    const auto n = static_cast<Eigen::Index>(table.rows());
    Matrix out = Matrix::Zero(n, static_cast<Eigen::Index>(layout.size()));
    Eigen::Index j = 0;
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        const auto slot = static_cast<std::size_t>(table.col_slot[i]);
        if (schema.columns[i].kind == ColumnKind::Numeric) {
            const auto& vals = table.numeric[slot];
            const double m = mean[slot];
            const double s = stdev[slot];
            for (Eigen::Index r = 0; r < n; ++r)
                out(r, j) = (vals[static_cast<std::size_t>(r)] - m) / s;
            ++j;
        } else {
            const auto& vocab = schema.columns[i].vocab;
            std::unordered_map<std::string, Eigen::Index> at;
            for (std::size_t k = 0; k < vocab.size(); ++k)
                at.emplace(vocab[k], static_cast<Eigen::Index>(k));
            const auto& vals = table.categorical[slot];
            for (Eigen::Index r = 0; r < n; ++r) {
                const auto it = at.find(vals[static_cast<std::size_t>(r)]);
                // unseen categories encode as an all-zero group
                if (it != at.end()) out(r, j + it->second) = 1.0;
            }
            j += static_cast<Eigen::Index>(vocab.size());
        }
    }
    return out;
}

json FittedTransform::to_json() const {
    json cols = json::array();
    for (const auto& col : layout)
        cols.push_back(json{{"name", col.name},
                            {"source_col", col.source_col},
                            {"onehot", col.onehot},
                            {"group", col.group},
                            {"category", col.category}});
    return json{{"schema", schema.to_json()},
                {"mean", mean},
                {"stdev", stdev},
                {"layout", std::move(cols)}};
}

FittedTransform FittedTransform::from_json(const json& j) {
    FittedTransform t;
    t.schema = FeatureSchema::from_json(j.at("schema"));
    t.mean = j.at("mean").get<std::vector<double>>();
    t.stdev = j.at("stdev").get<std::vector<double>>();
    for (const auto& c : j.at("layout")) {
        EncodedColumn col;
        col.name = c.at("name").get<std::string>();
        col.source_col = c.at("source_col").get<int>();
        col.onehot = c.at("onehot").get<bool>();
        col.group = c.at("group").get<int>();
        col.category = c.at("category").get<std::string>();
        t.layout.push_back(std::move(col));
    }
    return t;
}

FittedTransform fit_transform(const RawTable& fit_rows) {
    if (fit_rows.rows() == 0) throw DataError("cannot fit a transform on an empty table");
    FittedTransform t;
    t.schema = fit_rows.schema;
    int group = 0;
    for (std::size_t i = 0; i < t.schema.columns.size(); ++i) {
        auto& col = t.schema.columns[i];
        const auto slot = static_cast<std::size_t>(fit_rows.col_slot[i]);
        if (col.kind == ColumnKind::Numeric) {
            const auto& vals = fit_rows.numeric[slot];
            const double n = static_cast<double>(vals.size());
            const double m = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
            double ss = 0.0;
            for (double v : vals) ss += (v - m) * (v - m);
            const double s = std::sqrt(ss / n);  // population std
            t.mean.push_back(m);
            t.stdev.push_back(s > 0.0 ? s : 1.0);
            t.layout.push_back({col.name, static_cast<int>(i), false, -1, ""});
        } else {
            if (col.vocab.empty()) {
                std::set<std::string> seen(fit_rows.categorical[slot].begin(),
                                           fit_rows.categorical[slot].end());
                col.vocab.assign(seen.begin(), seen.end());
            }
            for (const auto& category : col.vocab)
                t.layout.push_back(
                    {col.name + "=" + category, static_cast<int>(i), true, group, category});
            ++group;
        }
    }
    return t;
}

std::pair<Matrix, FittedTransform> encode_and_scale(const RawTable& table,
                                                    const FeatureSchema& schema) {
    RawTable fitted = table;
    fitted.schema = schema;
    const FittedTransform t = fit_transform(fitted);
    Matrix x = t.apply(fitted);
    return {std::move(x), t};
}

void DataSplit::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    const auto names = layout_names(transform.layout);
    write_matrix_csv(dir + "/train.csv", names, train_x, train_y);
    write_matrix_csv(dir + "/val.csv", names, val_x, val_y);
    write_matrix_csv(dir + "/test.csv", names, test_x, test_y);
    write_text_file(dir + "/transform.json", transform.to_json().dump(2) + "\n");
}

DataSplit DataSplit::load(const std::string& dir) {
    DataSplit s;
    s.transform = FittedTransform::from_json(json::parse(read_text_file(dir + "/transform.json")));
    const std::size_t n_cols = s.transform.layout.size();
    std::tie(s.train_x, s.train_y) = read_matrix_csv(dir + "/train.csv", n_cols);
    std::tie(s.val_x, s.val_y) = read_matrix_csv(dir + "/val.csv", n_cols);
    std::tie(s.test_x, s.test_y) = read_matrix_csv(dir + "/test.csv", n_cols);
    return s;
}

DataSplit prepare_split(const RawTable& table, std::uint64_t seed) {
    const auto part = stratified_partition(table.labels, seed);
    const RawTable train_rows = table.select(part.train);
    DataSplit s;
    s.transform = fit_transform(train_rows);
    s.train_x = s.transform.apply(train_rows);
    s.val_x = s.transform.apply(table.select(part.val));
    s.test_x = s.transform.apply(table.select(part.test));
    auto to_vec = [&](const std::vector<std::size_t>& idx) {
        IntVector y(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            y[static_cast<Eigen::Index>(i)] = table.labels[idx[i]];
        return y;
    };
    s.train_y = to_vec(part.train);
    s.val_y = to_vec(part.val);
    s.test_y = to_vec(part.test);
    return s;
}

void SynthSpec::validate() const {
    if (n < 100) throw ConfigError("synthetic datasets need n >= 100");
    if (n_numeric < 1) throw ConfigError("synthetic datasets need at least one numeric column");
    if (n_categorical < 0) throw ConfigError("negative categorical column count");
    if (imbalance < 0.0 || imbalance > 1.0) throw ConfigError("imbalance must be in [0, 1]");
    if (noise < 0.0 || noise > 1.0) throw ConfigError("noise must be in [0, 1]");
    if (separation <= 0.0) throw ConfigError("separation must be positive");
    if (vocab < 2) throw ConfigError("categorical vocabulary needs at least 2 values");
    if (xor_pairs < 0) throw ConfigError("negative xor pair count");
    if (2 * xor_pairs > n_numeric)
        throw ConfigError("xor pairs need two numeric columns each");
}

json SynthSpec::to_json() const {
    return json{{"n", n},
                {"n_numeric", n_numeric},
                {"n_categorical", n_categorical},
                {"imbalance", imbalance},
                {"noise", noise},
                {"separation", separation},
                {"vocab", vocab},
                {"xor_pairs", xor_pairs}};
}

SynthSpec SynthSpec::from_json(const json& j) {
    SynthSpec s;
    if (j.contains("n")) s.n = j.at("n").get<std::size_t>();
    if (j.contains("n_numeric")) s.n_numeric = j.at("n_numeric").get<int>();
    if (j.contains("n_categorical")) s.n_categorical = j.at("n_categorical").get<int>();
    if (j.contains("imbalance")) s.imbalance = j.at("imbalance").get<double>();
    if (j.contains("noise")) s.noise = j.at("noise").get<double>();
    if (j.contains("separation")) s.separation = j.at("separation").get<double>();
    if (j.contains("vocab")) s.vocab = j.at("vocab").get<int>();
    if (j.contains("xor_pairs")) s.xor_pairs = j.at("xor_pairs").get<int>();
    s.validate();
    return s;
}

RawTable gen_synth(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    FeatureSchema schema;
    for (int j = 0; j < spec.n_numeric; ++j)
        schema.columns.push_back({"num" + std::to_string(j), ColumnKind::Numeric, {}});
    for (int j = 0; j < spec.n_categorical; ++j)
        schema.columns.push_back({"cat" + std::to_string(j), ColumnKind::Categorical, {}});
    schema.label_column = "label";
    schema.positive_label = "malicious";

    RawTable t = RawTable::with_schema(schema);
    const auto n_malicious =
        static_cast<std::size_t>(std::llround(spec.imbalance * static_cast<double>(spec.n)));
    std::vector<int> labels(spec.n, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_malicious), 1);
    Rng label_rng(seed_mix(seed, 1));
    label_rng.shuffle(labels);

    Rng num_rng(seed_mix(seed, 2));
    Rng cat_rng(seed_mix(seed, 3));
    const double offset = spec.separation / 2.0;
    const double weight_total = static_cast<double>(spec.vocab) *
                                static_cast<double>(spec.vocab + 1) / 2.0;
    const double mode_sigma = 0.35;
    for (std::size_t r = 0; r < spec.n; ++r) {
        const double mu = labels[r] == 1 ? offset : -offset;
        // sign-product pairs: each pair's coordinates sit at +-1 and multiply to
        // +1 for benign rows and -1 for malicious ones, so per-class marginals
        // match and the class lives only in the interaction
        for (int p = 0; p < spec.xor_pairs; ++p) {
            const double s = num_rng.uniform() < 0.5 ? -1.0 : 1.0;
            const double partner = labels[r] == 1 ? -s : s;
            t.numeric[static_cast<std::size_t>(2 * p)].push_back(
                num_rng.normal(s, mode_sigma));
            t.numeric[static_cast<std::size_t>(2 * p + 1)].push_back(
                num_rng.normal(partner, mode_sigma));
        }
        for (int j = 2 * spec.xor_pairs; j < spec.n_numeric; ++j)
            t.numeric[static_cast<std::size_t>(j)].push_back(num_rng.normal(mu, 1.0));
        for (int j = 0; j < spec.n_categorical; ++j) {
            // class-correlated draw: benign weights fall with the value index,
            // malicious weights rise, both summing to vocab*(vocab+1)/2
            double u = cat_rng.uniform() * weight_total;
            int pick = spec.vocab - 1;
            for (int k = 0; k < spec.vocab; ++k) {
                const double w = labels[r] == 1 ? static_cast<double>(k + 1)
                                                : static_cast<double>(spec.vocab - k);
                if (u < w) {
                    pick = k;
                    break;
                }
                u -= w;
            }
            t.categorical[static_cast<std::size_t>(j)].push_back("v" + std::to_string(pick));
        }
    }

    const auto n_flip =
        static_cast<std::size_t>(std::llround(spec.noise * static_cast<double>(spec.n)));
    if (n_flip > 0) {
        std::vector<std::size_t> idx(spec.n);
        std::iota(idx.begin(), idx.end(), 0);
        Rng noise_rng(seed_mix(seed, 4));
        noise_rng.shuffle(idx);
        for (std::size_t i = 0; i < n_flip; ++i) labels[idx[i]] = 1 - labels[idx[i]];
    }

    t.labels = std::move(labels);
    t.label_values.reserve(spec.n);
    for (int lab : t.labels) t.label_values.emplace_back(lab == 1 ? "malicious" : "benign");
    return t;
}

RawTable gen_synth(std::size_t n, int n_numeric, int n_categorical, double imbalance, double noise,
                   std::uint64_t seed) {
    SynthSpec spec;
    spec.n = n;
    spec.n_numeric = n_numeric;
    spec.n_categorical = n_categorical;
    spec.imbalance = imbalance;
    spec.noise = noise;
    return gen_synth(spec, seed);
}

}  // namespace advens
