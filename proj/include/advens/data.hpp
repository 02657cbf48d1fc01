#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "advens/nn.hpp"

namespace advens {

enum class ColumnKind { Numeric, Categorical };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> vocab;  // categorical only; may be filled at fit time
};

// Binary label mapping: either positive_label (value == positive -> 1) or
// negative_label (value != negative -> 1). Exactly one must be set.
struct FeatureSchema {
    std::vector<ColumnSpec> columns;
    std::string label_column;
    std::string positive_label;
    std::string negative_label;
    bool use_negative = false;
    std::vector<std::string> ignored_columns;

    void validate() const;
    int label_of(const std::string& value) const;
    json to_json() const;
    static FeatureSchema from_json(const json& j);
    static FeatureSchema load(const std::string& path);
    void save(const std::string& path) const;
};

// Column-major raw rows; column order follows the schema. col_slot maps a schema
// column index to its slot in the kind-specific storage.
struct RawTable {
    FeatureSchema schema;
    std::vector<std::vector<double>> numeric;
    std::vector<std::vector<std::string>> categorical;
    std::vector<int> col_slot;
    std::vector<int> labels;
    std::vector<std::string> label_values;   // original label strings
    std::vector<std::size_t> rejected_rows;  // 1-based input row numbers dropped at load

    std::size_t rows() const { return labels.size(); }
    RawTable select(const std::vector<std::size_t>& idx) const;
    static RawTable with_schema(const FeatureSchema& schema);
};

RawTable load_csv(const std::string& path, const FeatureSchema& schema);
void save_csv(const RawTable& table, const std::string& path);

// per-class counts for a sampling rate, round-half-away-from-zero on each class
std::vector<std::size_t> sample_counts(const std::vector<std::size_t>& class_counts, double rate);
// class-stratified subsample without replacement, original row order preserved
RawTable stratified_sample(const RawTable& table, double rate, std::uint64_t seed);

struct PartitionIdx {
    std::vector<std::size_t> train, val, test;
};
// 80/20 split, then 75/25 of the first part, stratified per class; every class
// needs at least 10 rows
PartitionIdx stratified_partition(const std::vector<int>& labels, std::uint64_t seed);

struct SplitMatrices {
    Matrix train_x, val_x, test_x;
    IntVector train_y, val_y, test_y;
};
SplitMatrices split(const Matrix& x, const IntVector& y, std::uint64_t seed);

struct EncodedColumn {
    std::string name;
    int source_col = 0;  // schema column index
    bool onehot = false;
    int group = -1;            // one-hot group id, -1 for numeric columns
    std::string category;      // category this indicator stands for
};

// One-hot encodes categoricals and standardizes numerics with the mean/population-std
// fitted on the fit table. Zero-variance columns keep std 1; values outside a fitted
// vocabulary encode as an all-zero group.
struct FittedTransform {
    FeatureSchema schema;  // with resolved vocabularies
    std::vector<double> mean, stdev;  // per numeric slot
    std::vector<EncodedColumn> layout;

    Matrix apply(const RawTable& table) const;
    std::vector<int> onehot_groups() const;  // per encoded column, -1 for continuous
    json to_json() const;
    static FittedTransform from_json(const json& j);
};

FittedTransform fit_transform(const RawTable& fit_rows);
std::pair<Matrix, FittedTransform> encode_and_scale(const RawTable& table,
                                                    const FeatureSchema& schema);

// header + numeric feature columns + trailing integer label column; used by the
// split partitions and the adversarial-set files
void write_matrix_csv(const std::string& path, const std::vector<std::string>& column_names,
                      const Matrix& x, const IntVector& y);
std::pair<Matrix, IntVector> read_matrix_csv(const std::string& path, std::size_t n_cols);

struct DataSplit {
    Matrix train_x, val_x, test_x;
    IntVector train_y, val_y, test_y;
    FittedTransform transform;

    void save(const std::string& dir) const;
    static DataSplit load(const std::string& dir);
};

// partition raw rows, fit the transform on the training rows only, encode all parts
DataSplit prepare_split(const RawTable& table, std::uint64_t seed);

struct SynthSpec {
    std::size_t n = 5000;
    int n_numeric = 8;
    int n_categorical = 3;
    double imbalance = 0.5;   // malicious fraction, exact count round(imbalance * n)
    double noise = 0.0;       // exact count round(noise * n) of labels flipped
    double separation = 1.7;  // distance between per-coordinate class means, in sigmas
    int vocab = 3;
    int xor_pairs = 0;  // leading numeric columns coded as sign-product pairs

    void validate() const;
    json to_json() const;
    static SynthSpec from_json(const json& j);
};

// Two gaussian clusters on the numeric coordinates plus class-correlated categorical
// columns; labels "malicious"/"benign". With xor_pairs > 0 the first 2*xor_pairs
// numeric columns instead sit at +-1 and carry the class in each pair's sign
// product, leaving their per-class marginals identical.
RawTable gen_synth(const SynthSpec& spec, std::uint64_t seed);
RawTable gen_synth(std::size_t n, int n_numeric, int n_categorical, double imbalance,
                   double noise, std::uint64_t seed);

}  // namespace advens
