#include "doctest.h"
#include "forge/io.hpp"
#include "forge/zoo.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace forge;
using forge::testing::frac;
using io::Json;

namespace {

std::string dump(const Json& j) { return j.dump(2); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("rationals parse from strings, integers and decimals") {
    CHECK(io::rational_from_json(Json("3/6")) == frac(1, 2));
    CHECK(io::rational_from_json(Json(-4)) == -4);
    CHECK(io::rational_from_json(Json::parse("0.3")) == frac(3, 10));
    CHECK(io::rational_from_json(Json("0.25")) == frac(1, 4));
    CHECK(io::rational_from_json(Json("0.09")) == frac(9, 100));
    CHECK(io::rational_from_json(Json("010")) == 10);
    CHECK_THROWS_AS(io::rational_from_json(Json(true)), std::invalid_argument);
    CHECK_THROWS_AS(io::rational_from_json(Json("1/0")), std::invalid_argument);
}

TEST_CASE("discrete loss round trip is byte identical") {
    for (const auto& loss : {zero_one(3), abstain_loss(4, frac(1, 2)), top_k_loss(4, 2), embedded_top2_loss()}) {
        Json first = io::to_json(loss);
        auto back = io::discrete_loss_from_json(Json::parse(dump(first)));
        CHECK(back.matrix() == loss.matrix());
        CHECK(back.reports() == loss.reports());
        CHECK(dump(io::to_json(back)) == dump(first));
    }
}

TEST_CASE("polyhedral loss, embedding and set function round trips") {
    auto L = abstain_surrogate(4);
    Json lj = io::to_json(L);
    CHECK(dump(io::to_json(io::polyhedral_loss_from_json(Json::parse(dump(lj))))) == dump(lj));

    auto phi = abstain_embedding(4);
    Json pj = io::to_json(phi);
    auto phi_back = io::embedding_from_json(Json::parse(dump(pj)));
    CHECK(phi_back.reports() == phi.reports());
    CHECK(dump(io::to_json(phi_back)) == dump(pj));

    auto f = indicator_nonempty(3);
    Json fj = io::to_json(f);
    CHECK(io::set_function_from_json(fj).values == f.values);
}

TEST_CASE("malformed specs are input errors") {
    CHECK_THROWS_AS(io::discrete_loss_from_json(Json::parse(R"({"outcomes":["a"]})")), std::invalid_argument);
    CHECK_THROWS_AS(io::discrete_loss_from_json(Json::parse(R"({"outcomes":["a","b"],"reports":["r"],"matrix":[["1"]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::discrete_loss_from_json(Json::parse(R"({"outcomes":["a","b"],"reports":["r"],"matrix":[["-1","0"]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::polyhedral_loss_from_json(Json::parse(R"({"d":-1,"outcomes":["a"],"pieces":[]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::link_file_from_json(Json::parse(R"({"kind":"mystery"})")), std::invalid_argument);
    CHECK_THROWS_AS(io::link_file_from_json(Json::parse(
                        R"({"norm":"linf","epsilon":"0","grid_m":4,"embedding":{"a":["1"]}})")),
                    std::invalid_argument);
}

TEST_CASE("link file round trip and evaluation") {
    io::LinkFile file;
    file.norm = Norm::L1;
    file.epsilon = 1;
    file.grid_m = 8;
    file.tie_break = {"abstain"};
    file.embedding = abstain_embedding(4);
    Json j = io::to_json(file);
    auto back = io::link_file_from_json(Json::parse(dump(j)));
    CHECK(dump(io::to_json(back)) == dump(j));

    auto link = io::make_link(back, abstain_surrogate(4));
    CHECK(link({0, 0}) == "abstain");
    CHECK(link({frac(-9, 10), frac(-9, 10)}) == abstain_link_l1(4, {frac(-9, 10), frac(-9, 10)}));

    auto sign = io::make_link(io::link_file_from_json(Json::parse(R"({"kind":"sign"})")), hinge());
    CHECK(sign({0}) == "+");
    auto top = io::make_link(io::link_file_from_json(Json::parse(R"({"kind":"top-k","k":2})")), top_k_surrogate(3, 2));
    CHECK(top({3, 1, 2}) == top_k_link({3, 1, 2}, 2));
}

TEST_CASE("audit csv layout") {
    CalibrationAudit audit;
    AuditEntry ok;
    ok.p = {frac(1, 4), frac(3, 4)};
    ok.gap = frac(1, 2);
    ok.witness = {frac(1, 8)};
    ok.witness_report = "+1";
    audit.entries.push_back(ok);
    AuditEntry vac;
    vac.p = {frac(1, 2), frac(1, 2)};
    vac.vacuous = true;
    audit.entries.push_back(vac);
    CHECK(io::audit_csv(audit) == "p,gap,witness,witness_report,verdict\n1/4 3/4,1/2,1/8,+1,ok\n1/2 1/2,,,,vacuous\n");
}

TEST_CASE("files written twice are identical") {
    auto dir = std::filesystem::temp_directory_path() / "forge_test_io";
    std::filesystem::remove_all(dir);
    io::write_json(dir / "a" / "loss.json", io::to_json(abstain_loss(3, frac(1, 3))));
    std::string first = slurp(dir / "a" / "loss.json");
    auto back = io::discrete_loss_from_json(io::read_json(dir / "a" / "loss.json"));
    io::write_json(dir / "b" / "loss.json", io::to_json(back));
    CHECK(slurp(dir / "b" / "loss.json") == first);
    CHECK(first.back() == '\n');
    CHECK_THROWS_AS(io::read_json(dir / "missing.json"), std::invalid_argument);
    io::write_text(dir / "bad.json", "{not json");
    CHECK_THROWS_AS(io::read_json(dir / "bad.json"), std::invalid_argument);
    std::filesystem::remove_all(dir);
}
