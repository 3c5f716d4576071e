#include "doctest.h"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/report.hpp"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>

using namespace ecoamlp;

TEST_CASE("config JSON round trip") {
    ExperimentConfig c;
    c.data_path = "x.csv";
    c.split = SplitSpec{0.6, 0.2, 0.2, 77, false};
    c.preprocessor.kind = PreprocessorKind::bootstrap_sample;
    c.preprocessor.sample_fraction = 0.8;
    c.preprocessor.outliers.k = 7;
    c.preprocessor.outliers.n = 3;
    c.preprocessor.outliers.measure = MeasureKind::euclidean;
    c.preprocessor.outliers.algorithm = OutlierAlgorithm::codb;
    c.classifier.kind = ClassifierKind::naive_bayes;
    c.classifier.knn_k = 9;
    c.classifier.automlp.ensemble_size = 6;
    c.classifier.automlp.lr_min = 0.01;
    c.classifier.automlp.warm_start = true;
    c.repeats = 4;
    c.drop_features = {"insulin"};
    c.output_path = "out";
    const auto doc = config_json(c);
    const auto back = config_from_json(doc);
    CHECK(config_json(back) == doc);
    CHECK(back.preprocessor.sample_fraction == 0.8);
    CHECK(back.classifier.automlp.ensemble_size == 6);
    CHECK(back.drop_features == std::vector<std::string>{"insulin"});

    CHECK(config_from_json(Json::object()).repeats == 1);
    CHECK_THROWS_AS(config_from_json(Json{{"colour", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json{{"k", "twelve"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json{{"measure", "cosine"}}), ConfigError);
}

TEST_CASE("network JSON round trip") {
    auto net = MlpNetwork::init(MlpConfig{3, 5, 0.25, 11});
    net.set_scaling(InputScaling{{1.0, 2.0, 3.0}, {0.5, 0.25, 0.0}});
    net.mark_epoch();
    const auto back = network_from_json(Json::parse(network_json(net).dump()));
    CHECK(back == net);
    auto bad = network_json(net);
    bad["weights_ho"] = Json::array({1.0});
    CHECK_THROWS_AS(network_from_json(bad), DataError);
}

TEST_CASE("outlier report JSON") {
    const auto d = test::random_dataset(3, 30, 3);
    OutlierParams p;
    p.k = 4;
    p.n = 3;
    const auto rep = ecodb_detect(d, p);
    const auto doc = outlier_report_json(rep);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(doc[i]["id"].get<InstanceId>() == rep.ranked[i].id);
        for (const char* key : {"pcl", "deviation", "kdist", "score"}) {
            CHECK(doc[i].contains(key));
        }
        CHECK(doc[i]["score"].get<double>() == rep.ranked[i].score);
    }
}

TEST_CASE("text helpers") {
    CHECK(percent(0.887) == "88.70");
    CHECK(percent(1.0) == "100.00");
    const auto ts = utc_timestamp();
    CHECK(ts.size() == 20);
    CHECK(ts.back() == 'Z');
}

TEST_CASE("report files") {
    const auto dir = std::filesystem::temp_directory_path() / "ecoamlp_report_test";
    std::filesystem::remove_all(dir);
    write_report_files(dir, Json{{"a", 1}}, "hello\n");
    std::ifstream j(dir / "report.json");
    CHECK(Json::parse(j)["a"] == 1);
    std::ifstream t(dir / "report.txt");
    std::string line;
    std::getline(t, line);
    CHECK(line == "hello");
    CHECK_FALSE(std::filesystem::exists(dir / "report.json.tmp"));
    std::filesystem::remove_all(dir);
}
