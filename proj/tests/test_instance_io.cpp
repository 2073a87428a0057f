#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "altproj/errors.hpp"
#include "altproj/instance_io.hpp"

using namespace altproj;

namespace {

InstanceSpec parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_instance(in);
}

// Drops comments and collapses whitespace.
std::string normalized(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        line = line.substr(0, line.find('#'));
        std::istringstream words(line);
        std::string w, joined;
        while (words >> w)
            joined += (joined.empty() ? "" : " ") + w;
        if (!joined.empty())
            out += joined + "\n";
    }
    return out;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int parse_error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("shipped fixtures round-trip")
{
    int seen = 0;
    for (const auto& e : std::filesystem::directory_iterator(ALTPROJ_FIXTURE_DIR)) {
        if (e.path().extension() != ".inst")
            continue;
        ++seen;
        const std::string text = read_file(e.path());
        CAPTURE(e.path().string());
        CHECK(normalized(serialize_instance(parse(text))) == normalized(text));
    }
    CHECK(seen >= 5);
}

TEST_CASE("two_lines fixture")
{
    const auto spec = parse_instance_file(std::string(ALTPROJ_FIXTURE_DIR) + "/two_lines_pi3.inst");
    CHECK(spec.kind == InstanceKind::two_lines);
    CHECK(spec.theta == kPi / 3);
}

TEST_CASE("custom angles keep every bit")
{
    InstanceSpec s;
    s.kind = InstanceKind::block_aligned;
    s.blocks = 3;
    s.rule = AngleRule::custom;
    s.angles = {0.1 + 0.2, 1.0 / 3.0, 5e-324};
    const auto back = parse(serialize_instance(s));
    CHECK(back == s);
}

TEST_CASE("explicit bases round-trip")
{
    InstanceSpec s;
    s.kind = InstanceKind::explicit_bases;
    s.dim = 2;
    Matrix a(2, 1), b(2, 1);
    a << Complex(1, 0), Complex(0, 0);
    b << Complex(0.6, 0), Complex(0, 0.8);
    s.bases = {a, b};
    const auto back = parse(serialize_instance(s));
    CHECK(back == s);
    const Instance inst = materialize(back);
    CHECK(inst.families.front().size() == 2);
}

TEST_CASE("materialize is deterministic")
{
    InstanceSpec s;
    s.seed = 5;
    s.dim = 7;
    s.ranks = {3, 4, 5};
    const auto a = materialize(s), b = materialize(s);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(a.families[0][k].basis() == b.families[0][k].basis());
}

TEST_CASE("parse errors name the field and line")
{
    CHECK(parse_error_line("altproj-instance v2\nkind random\nend\n") == 1);
    CHECK(parse_error_line("altproj-instance v1\nkind spiral\nend\n") == 2);
    CHECK(parse_error_line("altproj-instance v1\nkind two_lines\ncolour 3\nend\n") == 3);
    CHECK(parse_error_line("altproj-instance v1\nkind two_lines\ntheta abc\nend\n") == 3);
    try {
        parse("altproj-instance v1\nkind spiral\nend\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("kind") != std::string::npos);
    }
}

TEST_CASE("truncated files name the missing section")
{
    auto message = [](const std::string& text) {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("altproj-instance v1\nkind random\nseed 1\ndim 4\nranks 2 2\n").find("'end'") !=
          std::string::npos);
    CHECK(message("altproj-instance v1\nkind random\nseed 1\nranks 2 2\nend\n").find("'dim'") !=
          std::string::npos);
    CHECK(message("").find("header") != std::string::npos);
    CHECK(message("altproj-instance v1\nkind explicit\ndim 2\nsubspace 1\n1 0\nend\n")
              .find("subspace") != std::string::npos);
}
