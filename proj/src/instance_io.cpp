#include "altproj/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "altproj/errors.hpp"

namespace altproj {

namespace {

constexpr const char* kHeader = "altproj-instance v1";

struct Line {
    int number = 0;
    std::string key;
    std::vector<std::string> values;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Real to_real(const std::string& s, const Line& ln)
{
    // strtod keeps subnormals that stod rejects as out of range
    char* end = nullptr;
    const Real v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw ParseError("field '" + ln.key + "': '" + s + "' is not a number (line " +
                             std::to_string(ln.number) + ")",
                         ln.number);
    return v;
}

long long to_int(const std::string& s, const Line& ln)
{
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("field '" + ln.key + "': '" + s + "' is not an integer (line " +
                             std::to_string(ln.number) + ")",
                         ln.number);
    }
}

[[noreturn]] void fail(const std::string& msg, int line)
{
    throw ParseError(msg + " (line " + std::to_string(line) + ")", line);
}

void expect_count(const Line& ln, std::size_t n)
{
    if (ln.values.size() != n)
        fail("field '" + ln.key + "' expects " + std::to_string(n) + " value(s)", ln.number);
}

InstanceKind parse_kind(const Line& ln)
{
    expect_count(ln, 1);
    static const std::map<std::string, InstanceKind> kinds = {
        {"random", InstanceKind::random},
        {"two_lines", InstanceKind::two_lines},
        {"block_aligned", InstanceKind::block_aligned},
        {"convex_combination", InstanceKind::convex_combination},
        {"explicit", InstanceKind::explicit_bases},
    };
    const auto it = kinds.find(ln.values[0]);
    if (it == kinds.end())
        fail("field 'kind': unknown kind '" + ln.values[0] + "'", ln.number);
    return it->second;
}

AngleRule parse_rule(const Line& ln)
{
    expect_count(ln, 1);
    if (ln.values[0] == "inverse")
        return AngleRule::inverse;
    if (ln.values[0] == "inverse_sqrt")
        return AngleRule::inverse_sqrt;
    if (ln.values[0] == "custom")
        return AngleRule::custom;
    fail("field 'angle_rule': unknown rule '" + ln.values[0] + "'", ln.number);
}

std::string rule_name(AngleRule r)
{
    switch (r) {
    case AngleRule::inverse:
        return "inverse";
    case AngleRule::inverse_sqrt:
        return "inverse_sqrt";
    case AngleRule::custom:
        return "custom";
    }
    return "inverse";
}

std::vector<Index> to_ranks(const Line& ln)
{
    std::vector<Index> out;
    for (const auto& v : ln.values)
        out.push_back(static_cast<Index>(to_int(v, ln)));
    if (out.empty())
        fail("field '" + ln.key + "' needs at least one rank", ln.number);
    return out;
}

}  // namespace

std::string format_real(Real v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string kind_name(InstanceKind kind)
{
    switch (kind) {
    case InstanceKind::random:
        return "random";
    case InstanceKind::two_lines:
        return "two_lines";
    case InstanceKind::block_aligned:
        return "block_aligned";
    case InstanceKind::convex_combination:
        return "convex_combination";
    case InstanceKind::explicit_bases:
        return "explicit";
    }
    return "random";
}

InstanceSpec parse_instance(std::istream& in)
{
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        Line ln;
        ln.number = number;
        std::istringstream ss(text);
        ss >> ln.key;
        std::string tok;
        while (ss >> tok)
            ln.values.push_back(tok);
        lines.push_back(std::move(ln));
    }

    if (lines.empty())
        throw ParseError("empty instance file: missing section 'header'", 0);
    {
        const Line& h = lines.front();
        std::string joined = h.key;
        for (const auto& v : h.values)
            joined += " " + v;
        if (h.key != "altproj-instance")
            fail("missing header 'altproj-instance v1'", h.number);
        if (joined != kHeader)
            fail("unsupported version '" + joined + "'", h.number);
    }

    InstanceSpec spec;
    bool have_kind = false, have_end = false;
    bool have_seed = false, have_dim = false, have_ranks = false, have_theta = false;
    bool have_blocks = false, have_rule = false, have_angles = false, have_weights = false;
    int last_line = lines.back().number;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& ln = lines[i];
        if (have_end)
            fail("content after 'end'", ln.number);
        if (ln.key == "end") {
            have_end = true;
        } else if (ln.key == "kind") {
            spec.kind = parse_kind(ln);
            have_kind = true;
        } else if (ln.key == "seed") {
            expect_count(ln, 1);
            const long long s = to_int(ln.values[0], ln);
            if (s < 0)
                fail("field 'seed' must be non-negative", ln.number);
            spec.seed = static_cast<Seed>(s);
            have_seed = true;
        } else if (ln.key == "dim") {
            expect_count(ln, 1);
            spec.dim = static_cast<Index>(to_int(ln.values[0], ln));
            have_dim = true;
        } else if (ln.key == "ranks") {
            spec.ranks = to_ranks(ln);
            have_ranks = true;
        } else if (ln.key == "theta") {
            expect_count(ln, 1);
            spec.theta = to_real(ln.values[0], ln);
            have_theta = true;
        } else if (ln.key == "blocks") {
            expect_count(ln, 1);
            spec.blocks = static_cast<int>(to_int(ln.values[0], ln));
            have_blocks = true;
        } else if (ln.key == "angle_rule") {
            spec.rule = parse_rule(ln);
            have_rule = true;
        } else if (ln.key == "angles") {
            for (const auto& v : ln.values)
                spec.angles.push_back(to_real(v, ln));
            have_angles = true;
        } else if (ln.key == "weights") {
            for (const auto& v : ln.values)
                spec.weights.push_back(to_real(v, ln));
            have_weights = true;
        } else if (ln.key == "product") {
            spec.products.push_back(to_ranks(ln));
        } else if (ln.key == "subspace") {
            expect_count(ln, 1);
            if (!have_dim)
                fail("field 'subspace' before 'dim'", ln.number);
            const Index r = static_cast<Index>(to_int(ln.values[0], ln));
            if (r < 0 || r > spec.dim)
                fail("field 'subspace': rank out of range", ln.number);
            Matrix b(spec.dim, r);
            for (Index row = 0; row < spec.dim; ++row) {
                if (i + 1 >= lines.size())
                    throw ParseError("truncated file: missing section 'subspace rows'", last_line);
                const Line& rl = lines[++i];
                if (rl.key == "end")
                    fail("truncated subspace: missing section 'subspace rows'", rl.number);
                std::vector<std::string> toks{rl.key};
                toks.insert(toks.end(), rl.values.begin(), rl.values.end());
                if (static_cast<Index>(toks.size()) != 2 * r)
                    fail("subspace row expects " + std::to_string(2 * r) + " numbers", rl.number);
                Line named = rl;
                named.key = "subspace";
                for (Index c = 0; c < r; ++c)
                    b(row, c) = Complex(to_real(toks[2 * c], named), to_real(toks[2 * c + 1], named));
            }
            spec.bases.push_back(std::move(b));
        } else {
            fail("unknown field '" + ln.key + "'", ln.number);
        }
    }

    auto missing = [&](const std::string& what) {
        throw ParseError("missing section '" + what + "'", last_line);
    };
    if (!have_end)
        throw ParseError("truncated file: missing section 'end'", last_line);
    if (!have_kind)
        missing("kind");
    switch (spec.kind) {
    case InstanceKind::random:
        if (!have_seed)
            missing("seed");
        if (!have_dim)
            missing("dim");
        if (!have_ranks)
            missing("ranks");
        break;
    case InstanceKind::two_lines:
        if (!have_theta)
            missing("theta");
        break;
    case InstanceKind::block_aligned:
        if (!have_blocks)
            missing("blocks");
        if (!have_rule)
            missing("angle_rule");
        if (spec.rule == AngleRule::custom && !have_angles)
            missing("angles");
        break;
    case InstanceKind::convex_combination:
        if (!have_seed)
            missing("seed");
        if (!have_dim)
            missing("dim");
        if (!have_weights)
            missing("weights");
        if (spec.products.size() != spec.weights.size())
            missing("product");
        break;
    case InstanceKind::explicit_bases:
        if (!have_dim)
            missing("dim");
        if (spec.bases.size() < 2)
            missing("subspace");
        break;
    }
    return spec;
}

InstanceSpec parse_instance_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open instance file '" + path + "'", 0);
    return parse_instance(in);
}

std::string serialize_instance(const InstanceSpec& spec)
{
    std::ostringstream out;
    out << kHeader << "\n";
    out << "kind " << kind_name(spec.kind) << "\n";
    auto list = [&](const char* key, const auto& values, auto fmt) {
        out << key;
        for (const auto& v : values)
            out << ' ' << fmt(v);
        out << "\n";
    };
    auto as_int = [](Index v) { return std::to_string(v); };
    switch (spec.kind) {
    case InstanceKind::random:
        out << "seed " << spec.seed << "\n";
        out << "dim " << spec.dim << "\n";
        list("ranks", spec.ranks, as_int);
        break;
    case InstanceKind::two_lines:
        out << "theta " << format_real(spec.theta) << "\n";
        break;
    case InstanceKind::block_aligned:
        out << "blocks " << spec.blocks << "\n";
        out << "angle_rule " << rule_name(spec.rule) << "\n";
        if (spec.rule == AngleRule::custom)
            list("angles", spec.angles, format_real);
        break;
    case InstanceKind::convex_combination:
        out << "seed " << spec.seed << "\n";
        out << "dim " << spec.dim << "\n";
        list("weights", spec.weights, format_real);
        for (const auto& p : spec.products)
            list("product", p, as_int);
        break;
    case InstanceKind::explicit_bases:
        out << "dim " << spec.dim << "\n";
        for (const auto& b : spec.bases) {
            out << "subspace " << b.cols() << "\n";
            for (Index i = 0; i < b.rows(); ++i) {
                for (Index j = 0; j < b.cols(); ++j) {
                    if (j)
                        out << ' ';
                    out << format_real(b(i, j).real()) << ' ' << format_real(b(i, j).imag());
                }
                out << "\n";
            }
        }
        break;
    }
    out << "end\n";
    return out.str();
}

Instance materialize(const InstanceSpec& spec)
{
    Instance inst;
    switch (spec.kind) {
    case InstanceKind::random:
        inst.families.push_back(random_instance(spec.dim, spec.ranks, spec.seed));
        break;
    case InstanceKind::two_lines: {
        auto [a, b] = two_lines(spec.theta);
        inst.families.push_back({a, b});
        break;
    }
    case InstanceKind::block_aligned:
        inst.block_model = block_aligned(spec.blocks, spec.rule, spec.angles);
        inst.families.push_back(inst.block_model->subspaces());
        break;
    case InstanceKind::convex_combination:
        for (std::size_t i = 0; i < spec.products.size(); ++i)
            inst.families.push_back(random_instance(spec.dim, spec.products[i], spec.seed + i));
        inst.weights = spec.weights;
        break;
    case InstanceKind::explicit_bases: {
        std::vector<Subspace> fam;
        for (const auto& b : spec.bases) {
            if (b.rows() != spec.dim)
                throw InputError("explicit instance: basis row count differs from dim");
            fam.push_back(orthonormalize(b));
        }
        inst.families.push_back(std::move(fam));
        break;
    }
    }
    return inst;
}

}  // namespace altproj
