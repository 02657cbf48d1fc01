#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "advens/common.hpp"
#include "advens/data.hpp"

using namespace advens;

namespace {

FeatureSchema tiny_schema() {
    FeatureSchema schema;
    schema.columns = {{"duration", ColumnKind::Numeric, {}},
                      {"proto", ColumnKind::Categorical, {}},
                      {"bytes", ColumnKind::Numeric, {}}};
    schema.label_column = "label";
    schema.positive_label = "attack";
    return schema;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/advens_data_") + name;
}

}  // namespace

TEST_CASE("partition is stratified 60/20/20 with no overlap") {
    std::vector<int> labels(1000);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i < 300 ? 1 : 0;
    PartitionIdx part = stratified_partition(labels, 11);
    CHECK(part.train.size() == 600);
    CHECK(part.val.size() == 200);
    CHECK(part.test.size() == 200);

    std::set<std::size_t> seen;
    auto count_pos = [&](const std::vector<std::size_t>& idx) {
        std::size_t pos = 0;
        for (std::size_t i : idx) {
            CHECK(seen.insert(i).second);
            pos += static_cast<std::size_t>(labels[i] == 1);
        }
        return pos;
    };
    CHECK(count_pos(part.train) == 180);
    CHECK(count_pos(part.val) == 60);
    CHECK(count_pos(part.test) == 60);
    CHECK(seen.size() == 1000);

    PartitionIdx again = stratified_partition(labels, 11);
    CHECK(again.train == part.train);
    PartitionIdx other = stratified_partition(labels, 12);
    CHECK(other.train != part.train);
}

TEST_CASE("partition refuses classes with fewer than ten rows") {
    std::vector<int> labels(100, 0);
    for (int i = 0; i < 9; ++i) labels[static_cast<std::size_t>(i)] = 1;
    CHECK_THROWS_AS(stratified_partition(labels, 1), DataError);
}

TEST_CASE("standardization uses the population deviation") {
    FeatureSchema schema;
    schema.columns = {{"x", ColumnKind::Numeric, {}}};
    schema.label_column = "label";
    schema.positive_label = "1";
    RawTable t = RawTable::with_schema(schema);
    for (int v : {1, 2, 3}) {
        t.numeric[0].push_back(v);
        t.labels.push_back(v % 2);
        t.label_values.push_back(v % 2 ? "1" : "0");
    }
    FittedTransform tf = fit_transform(t);
    CHECK(tf.mean[0] == doctest::Approx(2.0));
    CHECK(tf.stdev[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    Matrix x = tf.apply(t);
    CHECK(x(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(x(1, 0) == doctest::Approx(0.0));
    CHECK(x(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
}

TEST_CASE("constant columns standardize to zero instead of dividing by zero") {
    FeatureSchema schema;
    schema.columns = {{"x", ColumnKind::Numeric, {}}};
    schema.label_column = "label";
    schema.positive_label = "1";
    RawTable t = RawTable::with_schema(schema);
    for (int i = 0; i < 4; ++i) {
        t.numeric[0].push_back(7.5);
        t.labels.push_back(i % 2);
        t.label_values.push_back(i % 2 ? "1" : "0");
    }
    FittedTransform tf = fit_transform(t);
    CHECK(tf.stdev[0] == 1.0);
    CHECK(tf.apply(t).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one-hot encoding marks groups and zeroes unseen categories") {
    FeatureSchema schema;
    schema.columns = {{"proto", ColumnKind::Categorical, {}},
                      {"x", ColumnKind::Numeric, {}}};
    schema.label_column = "label";
    schema.positive_label = "1";
    RawTable t = RawTable::with_schema(schema);
    for (std::string p : {"tcp", "udp", "icmp", "tcp"}) {
        t.categorical[0].push_back(p);
        t.numeric[0].push_back(1.0);
        t.labels.push_back(0);
        t.label_values.push_back("0");
    }
    FittedTransform tf = fit_transform(t);
    // vocab is sorted, so columns are proto=icmp, proto=tcp, proto=udp, then x
    REQUIRE(tf.layout.size() == 4);
    CHECK(tf.layout[0].name == "proto=icmp");
    CHECK(tf.layout[1].name == "proto=tcp");
    CHECK(tf.layout[2].name == "proto=udp");
    CHECK(tf.layout[3].name == "x");
    CHECK(tf.onehot_groups() == std::vector<int>{0, 0, 0, -1});

    RawTable fresh = RawTable::with_schema(tf.schema);
    fresh.categorical[0].push_back("sctp");  // unseen at fit time
    fresh.numeric[0].push_back(1.0);
    fresh.labels.push_back(0);
    fresh.label_values.push_back("0");
    Matrix x = tf.apply(fresh);
    CHECK(x(0, 0) == 0.0);
    CHECK(x(0, 1) == 0.0);
    CHECK(x(0, 2) == 0.0);
}

TEST_CASE("transform and schema round-trip through json") {
    SynthSpec spec;
    spec.n = 120;
    spec.n_numeric = 3;
    spec.n_categorical = 2;
    RawTable t = gen_synth(spec, 5);
    FittedTransform tf = fit_transform(t);
    FittedTransform back = FittedTransform::from_json(tf.to_json());
    CHECK(back.mean == tf.mean);
    CHECK(back.stdev == tf.stdev);
    CHECK(back.layout.size() == tf.layout.size());
    CHECK((back.apply(t) - tf.apply(t)).cwiseAbs().maxCoeff() == 0.0);

    FeatureSchema schema = tiny_schema();
    schema.ignored_columns = {"difficulty"};
    FeatureSchema schema_back = FeatureSchema::from_json(schema.to_json());
    CHECK(schema_back.label_column == "label");
    CHECK(schema_back.positive_label == "attack");
    CHECK(schema_back.ignored_columns == schema.ignored_columns);
}

TEST_CASE("csv loading rejects malformed records and records their positions") {
    const std::string path = temp_path("reject.csv");
    write_text_file(path,
                    "duration,proto,bytes,label\n"
                    "1.5,tcp,100,attack\n"
                    "oops,udp,50,normal\n"
                    "2.5,tcp,75\n"
                    "3.5,icmp,60,normal\n");
    RawTable t = load_csv(path, tiny_schema());
    CHECK(t.rows() == 2);
    // the header counts as record 1
    CHECK(t.rejected_rows == std::vector<std::size_t>{3, 4});
    CHECK(t.labels == std::vector<int>{1, 0});
    CHECK(t.label_values == std::vector<std::string>{"attack", "normal"});
    std::remove(path.c_str());
}

TEST_CASE("csv loading honors negative-label schemas and ignored columns") {
    FeatureSchema schema = tiny_schema();
    schema.positive_label.clear();
    schema.negative_label = "normal";
    schema.use_negative = true;
    schema.ignored_columns = {"difficulty"};
    const std::string path = temp_path("negative.csv");
    write_text_file(path,
                    "duration,proto,bytes,label,difficulty\n"
                    "1,tcp,10,normal,19\n"
                    "2,udp,20,neptune,7\n"
                    "3,tcp,30,smurf,3\n");
    RawTable t = load_csv(path, schema);
    CHECK(t.labels == std::vector<int>{0, 1, 1});
    std::remove(path.c_str());
}

TEST_CASE("csv save and load round-trip a table") {
    SynthSpec spec;
    spec.n = 120;
    spec.n_numeric = 2;
    spec.n_categorical = 1;
    RawTable t = gen_synth(spec, 9);
    const std::string path = temp_path("roundtrip.csv");
    save_csv(t, path);
    RawTable back = load_csv(path, t.schema);
    CHECK(back.rows() == t.rows());
    CHECK(back.labels == t.labels);
    CHECK(back.numeric == t.numeric);
    CHECK(back.categorical == t.categorical);
    std::remove(path.c_str());
}

TEST_CASE("sample counts round half away from zero per class") {
    CHECK(sample_counts({16233003}, 0.05) == std::vector<std::size_t>{811650});
    CHECK(sample_counts({10, 30, 1}, 0.05) == std::vector<std::size_t>{1, 2, 0});
    CHECK(sample_counts({7}, 1.0) == std::vector<std::size_t>{7});
    CHECK_THROWS_AS(sample_counts({10}, 0.0), ConfigError);
    CHECK_THROWS_AS(sample_counts({10}, 1.5), ConfigError);
}

TEST_CASE("stratified subsampling keeps class balance and row order") {
    SynthSpec spec;
    spec.n = 400;
    spec.imbalance = 0.25;
    RawTable t = gen_synth(spec, 3);
    RawTable sub = stratified_sample(t, 0.1, 21);
    CHECK(sub.rows() == 40);
    std::size_t pos = 0;
    for (int l : sub.labels) pos += static_cast<std::size_t>(l == 1);
    CHECK(pos == 10);

    RawTable again = stratified_sample(t, 0.1, 21);
    CHECK(again.labels == sub.labels);
    CHECK(again.numeric == sub.numeric);
}

TEST_CASE("synthetic generator hits exact class and noise counts") {
    SynthSpec spec;
    spec.n = 500;
    spec.imbalance = 0.3;
    spec.noise = 0.1;
    RawTable noisy = gen_synth(spec, 40);
    CHECK(noisy.rows() == 500);

    SynthSpec clean_spec = spec;
    clean_spec.noise = 0.0;
    RawTable clean = gen_synth(clean_spec, 40);
    std::size_t pos = 0;
    for (int l : clean.labels) pos += static_cast<std::size_t>(l == 1);
    CHECK(pos == 150);

    // identical features, exactly round(noise * n) labels flipped
    CHECK(noisy.numeric == clean.numeric);
    CHECK(noisy.categorical == clean.categorical);
    std::size_t flips = 0;
    for (std::size_t r = 0; r < 500; ++r)
        flips += static_cast<std::size_t>(noisy.labels[r] != clean.labels[r]);
    CHECK(flips == 50);

    std::set<std::string> values(noisy.label_values.begin(), noisy.label_values.end());
    CHECK(values == std::set<std::string>{"benign", "malicious"});
}

TEST_CASE("synthetic classes are linearly separated in feature space") {
    SynthSpec spec;
    spec.n = 600;
    spec.n_categorical = 0;
    RawTable t = gen_synth(spec, 8);
    auto [x, tf] = encode_and_scale(t, t.schema);
    Vector mean_pos = Vector::Zero(x.cols()), mean_neg = Vector::Zero(x.cols());
    double n_pos = 0, n_neg = 0;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        if (t.labels[static_cast<std::size_t>(r)] == 1) {
            mean_pos += x.row(r).transpose();
            n_pos += 1;
        } else {
            mean_neg += x.row(r).transpose();
            n_neg += 1;
        }
    }
    mean_pos /= n_pos;
    mean_neg /= n_neg;
    // separation 1.7 sigma per coordinate leaves a clear gap after standardization
    CHECK((mean_pos - mean_neg).norm() > 1.0);
}

TEST_CASE("sign-product pairs hide the class from per-column marginals") {
    SynthSpec spec;
    spec.n = 600;
    spec.n_numeric = 6;
    spec.xor_pairs = 2;  // columns 0..3 paired, 4..5 stay mean-shifted
    RawTable t = gen_synth(spec, 21);

    for (int pair = 0; pair < 2; ++pair) {
        const auto& a = t.numeric[static_cast<std::size_t>(2 * pair)];
        const auto& b = t.numeric[static_cast<std::size_t>(2 * pair + 1)];
        double mean_a = 0.0;
        std::size_t agree = 0;
        for (std::size_t r = 0; r < spec.n; ++r) {
            mean_a += a[r];
            const int product = a[r] * b[r] > 0.0 ? 1 : -1;
            const int want = t.labels[r] == 1 ? -1 : 1;
            agree += static_cast<std::size_t>(product == want);
        }
        CHECK(std::abs(mean_a / static_cast<double>(spec.n)) < 0.2);
        CHECK(static_cast<double>(agree) / static_cast<double>(spec.n) > 0.98);
    }

    json j = spec.to_json();
    CHECK(j.at("xor_pairs") == 2);
    CHECK(SynthSpec::from_json(j).xor_pairs == 2);

    SynthSpec bad = spec;
    bad.xor_pairs = 4;  // needs eight numeric columns
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.xor_pairs = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("prepare_split fits the transform on training rows only") {
    SynthSpec spec;
    spec.n = 400;
    spec.n_numeric = 4;
    spec.n_categorical = 1;
    RawTable t = gen_synth(spec, 14);
    DataSplit split = prepare_split(t, 14);
    CHECK(split.train_x.rows() == 240);
    CHECK(split.val_x.rows() == 80);
    CHECK(split.test_x.rows() == 80);
    CHECK(split.train_x.cols() == split.val_x.cols());

    // standardized training numerics average to zero; held-out parts need not
    const auto groups = split.transform.onehot_groups();
    for (Eigen::Index c = 0; c < split.train_x.cols(); ++c) {
        if (groups[static_cast<std::size_t>(c)] != -1) continue;
        CHECK(std::abs(split.train_x.col(c).mean()) < 1e-9);
    }
}

TEST_CASE("splits round-trip through their directory format") {
    SynthSpec spec;
    spec.n = 200;
    spec.n_numeric = 3;
    spec.n_categorical = 1;
    DataSplit split = prepare_split(gen_synth(spec, 2), 2);
    const std::string dir = temp_path("split_dir");
    split.save(dir);
    DataSplit back = DataSplit::load(dir);
    CHECK((back.train_x - split.train_x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.val_x - split.val_x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.test_x - split.test_x).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.train_y.cwiseEqual(split.train_y).all());
    CHECK(back.transform.layout.size() == split.transform.layout.size());
}

TEST_CASE("matrix csv files round-trip exactly") {
    Rng rng(6);
    Matrix x(9, 3);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 3; ++c) x(r, c) = rng.normal() * 1e3;
    x(0, 0) = 0.1 + 0.2;  // not exactly representable; exercises shortest round-trip
    IntVector y(9);
    for (int r = 0; r < 9; ++r) y[r] = r % 2;
    const std::string path = temp_path("matrix.csv");
    write_matrix_csv(path, {"a", "b", "c"}, x, y);
    auto [xb, yb] = read_matrix_csv(path, 3);
    CHECK((xb - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK(yb.cwiseEqual(y).all());
    std::remove(path.c_str());
}
