#include "treefpp/zoo.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace treefpp {

namespace {

std::shared_ptr<const GroupPresentation> parse_named(const std::string& text,
                                                     const std::string& name) {
    auto g = parse_presentation_shared(text);
    g->set_name(name);
    return g;
}

std::vector<std::pair<std::string, std::string>> split_params(const std::string& params) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream in(params);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        const size_t eq = piece.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("malformed parameter '" + piece + "', expected k=v");
        }
        out.push_back({piece.substr(0, eq), piece.substr(eq + 1)});
    }
    return out;
}

long parse_long(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid " + what + " '" + text + "'");
    }
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long q = 2; q * q <= p; ++q) {
        if (p % q == 0) return false;
    }
    return true;
}

// "sym3" / "alt4" / "cyc5" -> (degree, element ranks)
std::pair<int, std::vector<uint16_t>> named_perm_group(const std::string& name) {
    size_t i = 0;
    while (i < name.size() && std::isalpha(static_cast<unsigned char>(name[i]))) ++i;
    const std::string kind = name.substr(0, i);
    if (i == name.size()) throw std::invalid_argument("permutation group '" + name +
                                                      "' is missing its degree");
    const long k = parse_long(name.substr(i), "permutation degree");
    if (k < 2 || k > PermTable::kMaxDegree) {
        throw std::invalid_argument("permutation degree must be between 2 and 8");
    }
    const PermTable& table = PermTable::shared(static_cast<int>(k));
    std::vector<uint16_t> ranks;
    if (kind == "sym") {
        for (uint32_t r = 0; r < table.size(); ++r) ranks.push_back(static_cast<uint16_t>(r));
    } else if (kind == "alt") {
        for (uint32_t r = 0; r < table.size(); ++r) {
            if (table.parity(static_cast<uint16_t>(r)) == 0) {
                ranks.push_back(static_cast<uint16_t>(r));
            }
        }
    } else if (kind == "cyc") {
        Perm cycle(k);
        for (long x = 0; x < k; ++x) cycle[x] = static_cast<uint8_t>((x + 1) % k);
        const uint16_t c = table.rank_of(cycle);
        for (long e = 0; e < k; ++e) ranks.push_back(table.power(c, static_cast<uint64_t>(e)));
    } else {
        throw std::invalid_argument("unknown permutation group kind '" + kind +
                                    "', expected sym, alt or cyc");
    }
    return {static_cast<int>(k), ranks};
}

std::string ggs_text(long p, const std::vector<long>& alpha) {
    std::ostringstream out;
    out << "degree " << p << "\n";
    out << "gen a = (";
    for (long x = 0; x < p; ++x) out << (x ? ", 1" : "1");
    out << ") (";
    for (long x = 1; x <= p; ++x) out << (x > 1 ? " " : "") << x;
    out << ")\n";
    out << "gen b = (";
    for (long x = 0; x < p - 1; ++x) {
        if (x) out << ", ";
        if (alpha[x] == 0) {
            out << "1";
        } else {
            for (long e = 0; e < alpha[x]; ++e) out << (e ? " a" : "a");
        }
    }
    out << ", b) ()\n";
    return out.str();
}

std::string exceptional_text(long d) {
    std::ostringstream out;
    out << "degree " << d << "\n";
    out << "gen g0 = (g0";
    for (long x = 1; x < d; ++x) out << ", 1";
    out << ") (";
    for (long x = 2; x <= d; ++x) out << (x > 2 ? " " : "") << x;
    out << ")\n";
    out << "gen g1 = (g1";
    for (long x = 1; x < d; ++x) out << ", 1";
    out << ") (1 2)\n";
    return out.str();
}

const char* kGrigorchukText =
    "degree 2\n"
    "gen a = (1, 1) (1 2)\n"
    "gen b = (a, c) ()\n"
    "gen c = (a, d) ()\n"
    "gen d = (1, b) ()\n";

const char* kBasilicaText =
    "degree 2\n"
    "gen a = (1, b) ()\n"
    "gen b = (1, a) (1 2)\n";

const char* kObText =
    "degree 2\n"
    "gen a = (1, b) ()\n"
    "gen b = (1, a) (1 2)\n"
    "gen c = (1, 1) (1 2)\n";

const char* kChebyshevText =
    "degree 2\n"
    "gen a = (1, 1) (1 2)\n"
    "gen b = (b, a) ()\n";

}  // namespace

std::vector<ZooListing> list_zoo() {
    return {
        {"grigorchuk", "grigorchuk", "Grigorchuk group, degree 2, generators a b c d"},
        {"basilica", "basilica", "Basilica group, degree 2"},
        {"ob", "ob", "Basilica extended by the root swap c"},
        {"chebyshev2", "chebyshev2",
         "iterated monodromy group of the degree-2 Chebyshev map"},
        {"ggs:p=<prime>,alpha=<i.j...>", "ggs:p=3,alpha=1.2",
         "GGS family on a prime-degree tree; the exponent list must sum to 0 mod p"},
        {"exceptional:d=<k>", "exceptional:d=3",
         "iterated monodromy group of z(z-a)^(d-1) at the exceptional parameter"},
        {"wreath:<perm-group>", "wreath:sym2",
         "full iterated wreath product of a permutation group (sym<k>, alt<k>, cyc<k>)"},
        {"coset:<q>-<p>", "coset:alt3-sym3",
         "finite-type group whose labels all lie in one coset of the normal subgroup q of p"},
        {"custom:<file>", "custom:group.grp", "presentation loaded from a file"},
    };
}

ZooEntry build_zoo_group(const std::string& key, int threads) {
    const size_t colon = key.find(':');
    const std::string head = key.substr(0, colon);
    const std::string params =
        colon == std::string::npos ? std::string() : key.substr(colon + 1);
    const bool has_params = colon != std::string::npos;

    auto plain = [&](const char* text, const std::string& desc,
                     std::vector<std::string> facts) {
        if (has_params) throw std::invalid_argument("'" + head + "' takes no parameters");
        return ZooEntry{key, desc, GroupHandle(key, parse_named(text, head), threads),
                        std::move(facts)};
    };

    if (head == "grigorchuk") {
        return plain(kGrigorchukText, "Grigorchuk group",
                     {"level quotient orders 2, 8, 128, 4096"});
    }
    if (head == "basilica") {
        return plain(kBasilicaText, "Basilica group", {"nucleus has 7 elements"});
    }
    if (head == "ob") {
        return plain(kObText, "Basilica with a root swap",
                     {"nucleus has 7 elements", "null fixed-point proportion criterion holds"});
    }
    if (head == "chebyshev2") {
        return plain(kChebyshevText, "Chebyshev degree-2 monodromy group",
                     {"fixed-point proportion tends to 1/4"});
    }
    if (head == "ggs") {
        std::optional<long> p;
        std::vector<long> alpha;
        bool saw_alpha = false;
        for (const auto& [k, v] : split_params(params)) {
            if (k == "p") {
                p = parse_long(v, "prime");
            } else if (k == "alpha") {
                saw_alpha = true;
                std::stringstream in(v);
                std::string piece;
                while (std::getline(in, piece, '.')) {
                    alpha.push_back(parse_long(piece, "alpha entry"));
                }
            } else {
                throw std::invalid_argument("unknown ggs parameter '" + k + "'");
            }
        }
        if (!p || !saw_alpha) throw std::invalid_argument("ggs needs p=<prime> and alpha=<list>");
        if (*p < 3 || !is_prime(*p)) {
            throw std::invalid_argument("ggs needs an odd prime p >= 3");
        }
        if (*p > PermTable::kMaxDegree) {
            throw std::invalid_argument("ggs degree exceeds the supported maximum of 8");
        }
        if (alpha.size() != static_cast<size_t>(*p - 1)) {
            throw std::invalid_argument("ggs alpha list must have p-1 entries");
        }
        long sum = 0;
        bool nonzero = false;
        for (long& a : alpha) {
            a = ((a % *p) + *p) % *p;
            sum += a;
            nonzero = nonzero || a != 0;
        }
        if (!nonzero) throw std::invalid_argument("ggs alpha list must not vanish");
        if (sum % *p != 0) {
            throw std::invalid_argument("ggs alpha entries must sum to 0 mod p");
        }
        return ZooEntry{key, "GGS group of degree " + std::to_string(*p),
                        GroupHandle(key, parse_named(ggs_text(*p, alpha), key), threads),
                        {}};
    }
    if (head == "exceptional") {
        std::optional<long> d;
        for (const auto& [k, v] : split_params(params)) {
            if (k == "d") {
                d = parse_long(v, "degree");
            } else {
                throw std::invalid_argument("unknown exceptional parameter '" + k + "'");
            }
        }
        if (!d) throw std::invalid_argument("exceptional needs d=<degree>");
        if (*d < 3) throw std::invalid_argument("exceptional family needs degree >= 3");
        if (*d > PermTable::kMaxDegree) {
            throw std::invalid_argument("exceptional degree exceeds the supported maximum of 8");
        }
        return ZooEntry{key,
                        "monodromy group of z(z-a)^" + std::to_string(*d - 1) +
                            " at the exceptional parameter",
                        GroupHandle(key, parse_named(exceptional_text(*d), key), threads),
                        {"every level stabilizer surjects onto the group at every vertex"}};
    }
    if (head == "wreath") {
        if (params.empty()) throw std::invalid_argument("wreath needs a permutation group");
        auto [deg, ranks] = named_perm_group(params);
        return ZooEntry{key, "iterated wreath product of " + params,
                        GroupHandle(key, FiniteTypeSpec::iterated_wreath(deg, ranks)),
                        {}};
    }
    if (head == "coset") {
        const size_t dash = params.find('-');
        if (dash == std::string::npos) {
            throw std::invalid_argument("coset needs <subgroup>-<group>, e.g. alt3-sym3");
        }
        auto [qdeg, qranks] = named_perm_group(params.substr(0, dash));
        auto [pdeg, pranks] = named_perm_group(params.substr(dash + 1));
        if (qdeg != pdeg) {
            throw std::invalid_argument("coset subgroup and group act on different degrees");
        }
        return ZooEntry{key, "coset-constrained finite-type group over " + params,
                        GroupHandle(key, FiniteTypeSpec::coset_type(pdeg, pranks, qranks)),
                        {}};
    }
    if (head == "custom") {
        if (params.empty()) throw std::invalid_argument("custom needs a file path");
        std::ifstream in(params);
        if (!in) throw std::invalid_argument("cannot open presentation file '" + params + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        return ZooEntry{key, "presentation from " + params,
                        GroupHandle(key, parse_named(buffer.str(), params), threads),
                        {}};
    }
    throw std::invalid_argument("unknown group key '" + head + "'");
}

ComplexParameter exceptional_parameter(int d, int branch) {
    if (d < 3) throw std::invalid_argument("family needs degree >= 3");
    if (branch < 0 || branch >= d - 1) throw std::invalid_argument("branch out of range");
    const double theta = 2.0 * M_PI * branch / (d - 1);
    const std::complex<double> zeta(std::cos(theta), std::sin(theta));
    const std::complex<double> a = zeta * static_cast<double>(d) / (1.0 - d);
    return {a.real(), a.imag(), branch};
}

ParameterResiduals exceptional_parameter_residuals(int d, const ComplexParameter& param) {
    if (d < 3) throw std::invalid_argument("family needs degree >= 3");
    const std::complex<double> a(param.re, param.im);
    const auto f = [&](std::complex<double> z) {
        return z * std::pow(z - a, d - 1);
    };
    const auto fprime = [&](std::complex<double> z) {
        return std::pow(z - a, d - 2) * (static_cast<double>(d) * z - a);
    };
    const std::complex<double> free_crit = a / static_cast<double>(d);
    ParameterResiduals r;
    r.fixed_point = std::abs(f(free_crit) - free_crit);
    r.critical_a = std::abs(fprime(a));
    r.critical_free = std::abs(fprime(free_crit));
    return r;
}

mpq_class hyperbolicity_chi(const std::vector<std::optional<uint64_t>>& nu) {
    mpq_class chi = 2;
    for (const auto& v : nu) {
        if (!v) {
            chi -= 1;  // infinite ramification contributes a full unit
            continue;
        }
        if (*v < 1) throw std::invalid_argument("ramification values must be >= 1");
        mpq_class inv(1, static_cast<unsigned long>(*v));
        inv.canonicalize();
        chi -= 1 - inv;
    }
    return chi;
}

bool product_of_generators_transitive(const GroupPresentation& G, int n) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    uint64_t leaves = 1;
    for (int i = 0; i < n; ++i) {
        leaves *= static_cast<uint64_t>(G.degree());
        if (leaves > 20000000) throw LimitExceeded(leaves, n);
    }
    GenWord w;
    for (size_t i = 0; i < G.generator_count(); ++i) {
        w.push_back(static_cast<int32_t>(i + 1));
    }
    const Portrait p = G.evaluate(w, n);
    const std::vector<uint8_t> start(static_cast<size_t>(n), 0);
    std::vector<uint8_t> cur = apply_vertex(p, start);
    uint64_t steps = 1;
    while (cur != start) {
        cur = apply_vertex(p, cur);
        ++steps;
    }
    return steps == leaves;
}

}  // namespace treefpp
