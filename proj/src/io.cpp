#include "taublab/io.hpp"

#include "taublab/errors.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace taublab::io {

namespace {

[[noreturn]] void shape_error(const std::string& what) { throw ParseError("malformed JSON: " + what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) shape_error(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::int64_t integer(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) shape_error(what + " must be an integer");
    return j.get<std::int64_t>();
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path.string());
    out << text;
}

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    shape_error("rationals must be \"p/q\" strings or integers");
}

Json rational_to_json(const Rational& r) { return r.str(); }

LatticeSet lattice_set_from_json(const Json& j) {
    const std::int64_t dim = integer(field(j, "dim"), "dim");
    if (dim < 1) throw DomainError("dim must be at least 1");
    const Json& pts = field(j, "points");
    if (!pts.is_array()) shape_error("points must be an array");
    std::vector<LatticePoint> points;
    for (const auto& p : pts) {
        if (!p.is_array()) shape_error("each point must be an array of integers");
        std::vector<Coord> c;
        for (const auto& x : p) c.push_back(integer(x, "coordinate"));
        if (c.size() != static_cast<std::size_t>(dim)) {
            shape_error("point of dimension " + std::to_string(c.size()) + " in a set of dimension " +
                        std::to_string(dim));
        }
        points.emplace_back(std::move(c));
    }
    if (points.empty()) shape_error("points must be nonempty");
    return LatticeSet(static_cast<std::size_t>(dim), std::move(points));
}

Json lattice_set_to_json(const LatticeSet& E) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < E.size(); ++i) {
        auto p = E.point(i);
        pts.push_back(std::vector<Coord>(p.begin(), p.end()));
    }
    return Json{{"dim", E.dim()}, {"points", pts}};
}

ergodic::SystemSpec system_spec_from_json(const Json& j) {
    ergodic::SystemSpec spec;
    const Json& masses = field(j, "masses");
    if (!masses.is_array()) shape_error("masses must be an array");
    for (const auto& m : masses) spec.masses.push_back(rational_from_json(m));
    const std::int64_t dim = integer(field(j, "dim"), "dim");
    if (dim < 0) shape_error("dim must be nonnegative");
    spec.dim = static_cast<std::size_t>(dim);
    const Json& gens = field(j, "generators");
    if (!gens.is_array()) shape_error("generators must be an array");
    for (const auto& g : gens) {
        if (!g.is_array()) shape_error("each generator must be an array of atom indices");
        ergodic::Permutation p;
        for (const auto& x : g) {
            const std::int64_t v = integer(x, "generator entry");
            if (v < 0) throw DomainError("generator entries must be nonnegative atom indices");
            p.push_back(static_cast<std::size_t>(v));
        }
        spec.generators.push_back(std::move(p));
    }
    return spec;
}

Json system_to_json(const ergodic::AtomicSystem& system) {
    Json masses = Json::array();
    for (const auto& m : system.masses()) masses.push_back(m.str());
    Json gens = Json::array();
    for (std::size_t a = 0; a < system.dim(); ++a) gens.push_back(system.generator(a));
    return Json{{"masses", masses}, {"dim", system.dim()}, {"generators", gens}};
}

Json estimate_to_json(const TauberianEstimate& e) {
    Json witness;
    if (const auto* set = std::get_if<LatticeSet>(&e.witness)) {
        witness = lattice_set_to_json(*set).at("points");
    } else {
        witness = std::get<AtomSet>(e.witness);
    }
    return Json{{"alpha", e.alpha.str()},
                {"value", e.value.str()},
                {"witness", witness},
                {"mode", to_string(e.mode)},
                {"strategy", e.strategy},
                {"witness_measure", e.witness_measure.str()},
                {"halo_measure", e.halo_measure.str()}};
}

Json config_to_json(const search::SearchConfig& c) {
    const IntBox w = c.resolved_window();
    Json initial = Json::array();
    for (const auto& s : c.initial) initial.push_back(lattice_set_to_json(s));
    return Json{{"dim", c.dim},
                {"window", {{"lo", w.lo}, {"hi", w.hi}}},
                {"strategy", search::to_string(c.strategy)},
                {"seed", c.seed},
                {"budget", c.budget},
                {"family_max", c.family_max},
                {"operator", search::to_string(c.op)},
                {"initial", initial}};
}

search::SearchConfig config_from_json(const Json& j) {
    search::SearchConfig c;
    try {
        c.dim = field(j, "dim").get<std::size_t>();
        const Json& w = field(j, "window");
        c.window = IntBox(field(w, "lo").get<std::vector<Coord>>(), field(w, "hi").get<std::vector<Coord>>());
        c.strategy = search::parse_strategy(field(j, "strategy").get<std::string>());
        c.seed = field(j, "seed").get<std::uint64_t>();
        c.budget = field(j, "budget").get<std::size_t>();
        c.family_max = field(j, "family_max").get<std::int64_t>();
        c.op = search::parse_operator(field(j, "operator").get<std::string>());
        if (j.contains("initial")) {
            for (const auto& s : j.at("initial")) c.initial.push_back(lattice_set_from_json(s));
        }
    } catch (const nlohmann::json::exception& e) {
        shape_error(std::string("config: ") + e.what());
    }
    return c;
}

std::vector<Rational> parse_grid(const std::string& text) {
    std::vector<Rational> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ParseError("empty entry in grid \"" + text + "\"");
        grid.push_back(Rational::parse(item));
    }
    if (grid.empty()) throw ParseError("empty grid");
    return grid;
}

std::string decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", r.to_double());
    return buf;
}

std::string sweep_to_csv(const search::SweepResult& s) {
    std::ostringstream os;
    os << "alpha,value,witness_size,halo_size,strategy,alpha_decimal,value_decimal\n";
    for (const auto& row : s.rows) {
        os << row.alpha.str() << ',' << row.estimate.value.str() << ',' << row.estimate.witness_measure.str() << ','
           << row.halo_size << ',' << row.estimate.strategy << ',' << decimal(row.alpha) << ','
           << decimal(row.estimate.value) << '\n';
    }
    return os.str();
}

Json sweep_to_json(const search::SweepResult& s) {
    Json rows = Json::array();
    for (const auto& row : s.rows) {
        Json r = estimate_to_json(row.estimate);
        r["halo_size"] = row.halo_size;
        rows.push_back(std::move(r));
    }
    return Json{{"config", config_to_json(s.config)}, {"rows", rows}};
}

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return sha256_hex(os.str());
}

}  // namespace taublab::io
