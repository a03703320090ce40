#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "mm3/builtin.hpp"
#include "mm3/cse.hpp"
#include "mm3/io.hpp"
#include "support.hpp"

using namespace mm3;
using namespace mm3::test;
using nlohmann::json;

namespace {

std::string data_file(const char* name) { return read_text(std::filesystem::path(MM3_DATA_DIR) / name); }

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const FormatError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("shipped files round trip byte for byte") {
    for (const char* name : {"naive3.scheme.json", "paper58.scheme.json"}) {
        std::string text = data_file(name);
        SchemeFile f = parse_scheme(text);
        CHECK(serialize_scheme(f.scheme, f.metadata) == text);
    }
    std::string text = data_file("paper58.program.json");
    ProgramFile f = parse_program(text);
    CHECK(serialize_program(f.program, f.metadata) == text);
    CHECK(f.program == paper58_program());
    CHECK(parse_scheme(data_file("paper58.scheme.json")).scheme == paper58_scheme());
    CHECK(parse_scheme(data_file("naive3.scheme.json")).scheme == naive_scheme());
}

TEST_CASE("embedded listing parses to the built-in program") {
    CHECK(parse_program(kPaper58ProgramJson).program == paper58_program());
}

TEST_CASE("round trips on random schemes and their programs") {
    Rng rng(101);
    for (int t = 0; t < 40; ++t) {
        Scheme s = walk(rng, 150);
        Metadata meta{{"case", std::to_string(t)}, {"note", "quote \" and \\ backslash"}};
        SchemeFile sf = parse_scheme(serialize_scheme(s, meta));
        CHECK(sf.scheme == s);
        CHECK(sf.metadata == meta);
        CHECK(serialize_scheme(sf.scheme, sf.metadata) == serialize_scheme(s, meta));

        Program p = greedy_reduce(forms_of(s));
        ProgramFile pf = parse_program(serialize_program(p, meta));
        CHECK(pf.program == p);
        CHECK(pf.metadata == meta);
    }
}

TEST_CASE("kind detection") {
    CHECK(detect_kind(data_file("naive3.scheme.json")) == FileKind::Scheme);
    CHECK(detect_kind(data_file("paper58.program.json")) == FileKind::Program);
    CHECK(std::holds_alternative<ProgramFile>(parse_any(data_file("paper58.program.json"))));
    CHECK_THROWS_AS(detect_kind(R"({"format":"other"})"), FormatError);
    CHECK_THROWS_AS(detect_kind("[]"), FormatError);
}

TEST_CASE("scheme rejections name the field") {
    json doc = json::parse(data_file("paper58.scheme.json"));
    SUBCASE("coefficient out of range") {
        doc["components"][3]["v"][4] = 2;
        std::string msg = error_of([&] { parse_scheme(doc.dump()); });
        CHECK(msg.find("components[3].v[4]") != std::string::npos);
        CHECK(msg.find("coefficient 2") != std::string::npos);
    }
    SUBCASE("rank mismatch") {
        doc["rank"] = 22;
        CHECK(error_of([&] { parse_scheme(doc.dump()); }).find("rank") != std::string::npos);
    }
    SUBCASE("wrong length") {
        doc["components"][0]["w"] = json::array({1, 0});
        CHECK(error_of([&] { parse_scheme(doc.dump()); }).find("components[0].w") != std::string::npos);
    }
    SUBCASE("zero factor") {
        doc["components"][5]["u"] = json::array({0, 0, 0, 0, 0, 0, 0, 0, 0});
        CHECK(error_of([&] { parse_scheme(doc.dump()); }).find("components[5].u") != std::string::npos);
    }
    SUBCASE("other n") {
        doc["n"] = 4;
        CHECK_THROWS_AS(parse_scheme(doc.dump()), FormatError);
    }
    SUBCASE("wrong format tag") {
        doc["format"] = "mm-program/1";
        CHECK_THROWS_AS(parse_scheme(doc.dump()), FormatError);
    }
    SUBCASE("malformed JSON reports a position") {
        std::string msg = error_of([] { parse_scheme("{\n  \"format\": \"mm-scheme/1\",\n  \"n\": 3,,\n}"); });
        CHECK(msg.find("malformed JSON") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("program rejections") {
    json doc = json::parse(data_file("paper58.program.json"));
    SUBCASE("undefined product") {
        doc["outputs"]["c11"].push_back(json::array({"+", "m24"}));
        std::string msg = error_of([&] { parse_program(doc.dump()); });
        CHECK(msg.find("m24") != std::string::npos);
    }
    SUBCASE("cycle") {
        doc["assignments"][0]["lhs"] = "u3";
        std::string msg = error_of([&] { parse_program(doc.dump()); });
        CHECK(msg.find("cyclic") != std::string::npos);
    }
    SUBCASE("dangling intermediate") {
        doc["assignments"][0]["rhs"] = "u9";
        CHECK(error_of([&] { parse_program(doc.dump()); }).find("u9") != std::string::npos);
    }
    SUBCASE("bad op") {
        doc["assignments"][2]["op"] = "mul";
        CHECK(error_of([&] { parse_program(doc.dump()); }).find("assignments[2].op") != std::string::npos);
    }
    SUBCASE("missing output") {
        doc["outputs"].erase("c22");
        CHECK(error_of([&] { parse_program(doc.dump()); }).find("c22") != std::string::npos);
    }
    SUBCASE("misnumbered product") {
        doc["products"][0]["name"] = "m2";
        CHECK(error_of([&] { parse_program(doc.dump()); }).find("products[0]") != std::string::npos);
    }
    SUBCASE("bad input list") {
        doc["inputs"][0] = "a12";
        CHECK_THROWS_AS(parse_program(doc.dump()), FormatError);
    }
}

TEST_CASE("atomic writes replace the target") {
    auto dir = std::filesystem::temp_directory_path() / "mm3_io_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "x.json";
    write_atomic(path, "first");
    write_atomic(path, "second");
    CHECK(read_text(path) == "second");
    int files = 0;
    for ([[maybe_unused]] auto& entry : std::filesystem::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
    CHECK_THROWS(read_text(dir / "missing.json"));
}
