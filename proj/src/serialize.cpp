#include "treefpp/serialize.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace treefpp {

namespace {

uint64_t fnv1a(const void* data, size_t len, uint64_t h = 1469598103934665603ULL) {
    const auto* bytes = static_cast<const uint8_t*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json vertex_json(const std::vector<uint8_t>& path) {
    Json out = Json::array();
    for (uint8_t letter : path) out.push_back(static_cast<int>(letter) + 1);
    return out;
}

std::string format_or_identity(const GroupPresentation* G, const GenWord& w) {
    if (G) return G->format(w);
    std::string out;
    for (int32_t c : w) {
        if (!out.empty()) out += ' ';
        out += "g" + std::to_string(c < 0 ? -c : c) + (c < 0 ? "^-1" : "");
    }
    return out.empty() ? "1" : out;
}

void append_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t read_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
}

const char* end_kind_name(EndCountKind k) {
    switch (k) {
        case EndCountKind::Zero: return "zero";
        case EndCountKind::Finite: return "finite";
        case EndCountKind::Infinite: return "infinite";
    }
    return "unknown";
}

}  // namespace

void finalize_report(Report& r) {
    const std::string payload = r.results.dump();
    r.fingerprint = fnv1a(payload.data(), payload.size());
}

Json report_to_json(const Report& r) {
    Json out;
    out["schema"] = r.schema;
    out["version"] = r.version;
    out["config"] = r.config;
    out["group"] = r.group;
    out["results"] = r.results;
    out["elapsed_seconds"] = r.elapsed_seconds;
    out["fingerprint"] = hex64(r.fingerprint);
    return out;
}

std::string report_string(const Report& r) { return report_to_json(r).dump(2) + "\n"; }

Json rational_json(const mpq_class& q) {
    Json out;
    out["exact"] = rational_string(q);
    out["approx"] = rational_double(q);
    return out;
}

Json interval_json(const RationalInterval& v) {
    Json out;
    out["lo"] = rational_string(v.lo);
    out["hi"] = rational_string(v.hi);
    out["midpoint"] = v.midpoint();
    out["width"] = v.width();
    return out;
}

Json portrait_json(const Portrait& p) {
    const PermTable& table = PermTable::shared(p.degree);
    Json labels = Json::array();
    for (uint16_t lab : p.labels) labels.push_back(table.cycle_notation(lab));
    Json out;
    out["degree"] = p.degree;
    out["depth"] = p.depth;
    out["labels"] = labels;
    return out;
}

Json mc_json(const McEstimate& m) {
    Json out;
    out["level"] = m.level;
    out["samples"] = m.samples;
    out["hits"] = m.hits;
    out["estimate"] = m.estimate;
    out["std_error"] = m.std_error;
    return out;
}

Json fpp_series_json(const FppSeries& s) {
    Json levels = Json::array();
    for (const FppEntry& e : s.entries) {
        Json entry;
        entry["level"] = e.level;
        entry["provenance"] = e.provenance;
        if (e.exact_value) entry["exact"] = rational_json(*e.exact_value);
        if (e.enclosure) entry["enclosure"] = interval_json(*e.enclosure);
        if (e.mc) entry["mc"] = mc_json(*e.mc);
        if (e.quotient_order) entry["quotient_order"] = *e.quotient_order;
        levels.push_back(std::move(entry));
    }
    const char* mode = "auto";
    switch (s.mode) {
        case FppMode::Exact: mode = "exact"; break;
        case FppMode::Mc: mode = "mc"; break;
        case FppMode::Recursion: mode = "recursion"; break;
        case FppMode::Auto: mode = "auto"; break;
    }
    Json out;
    out["group"] = s.group_key;
    out["mode"] = mode;
    if (!s.note.empty()) out["note"] = s.note;
    out["levels"] = levels;
    return out;
}

Json transitivity_json(const TransitivityReport& r) {
    Json out;
    out["level"] = r.level;
    out["transitive"] = r.transitive;
    out["orbit_sizes"] = r.orbit_sizes;
    return out;
}

Json fractality_json(const FractalityReport& r, const GroupPresentation* G) {
    Json checks = Json::array();
    for (const VertexSurjectivity& c : r.checks) {
        Json entry;
        entry["stabilizer_level"] = c.stabilizer_level;
        entry["vertex"] = vertex_json(c.vertex);
        entry["surjective"] = c.surjective;
        if (c.missing) entry["missing"] = portrait_json(*c.missing);
        if (c.missing_word) entry["missing_word"] = format_or_identity(G, *c.missing_word);
        checks.push_back(std::move(entry));
    }
    const char* prop = "fractal";
    switch (r.property) {
        case FractalProperty::Fractal: prop = "fractal"; break;
        case FractalProperty::StronglyFractal: prop = "strongly-fractal"; break;
        case FractalProperty::SuperStronglyFractal: prop = "ssf"; break;
    }
    Json out;
    out["property"] = prop;
    out["max_stabilizer_level"] = r.max_stabilizer_level;
    out["target_level"] = r.target_level;
    out["pass_up_to_bound"] = r.pass_up_to_bound;
    out["note"] = r.note;
    out["checks"] = checks;
    return out;
}

Json martingale_json(const MartingaleReport& r) {
    Json levels = Json::array();
    for (const MartingaleLevelVerdict& v : r.levels) {
        Json entry;
        entry["level"] = v.level;
        entry["transitive_everywhere"] = v.transitive_everywhere;
        if (!v.failing_vertex.empty())
            entry["failing_vertex"] = vertex_json(v.failing_vertex);
        levels.push_back(std::move(entry));
    }
    Json out;
    out["max_level"] = r.max_level;
    out["pass"] = r.pass;
    if (!r.note.empty()) out["note"] = r.note;
    out["levels"] = levels;
    return out;
}

Json nucleus_json(const NucleusReport& r) {
    Json out;
    out["status"] = r.status == NucleusStatus::ContractingWithNucleus ? "contracting"
                                                                      : "inconclusive";
    if (!r.reason.empty()) out["reason"] = r.reason;
    const GroupPresentation* G = r.group.get();
    Json elements = Json::array();
    for (const NucleusElement& e : r.elements) {
        Json entry;
        entry["word"] = format_or_identity(G, e.word);
        entry["digest"] = hex64(e.digest);
        elements.push_back(std::move(entry));
    }
    out["elements"] = elements;
    out["size"] = r.elements.size();
    Json graph = Json::array();
    for (const SectionEdge& e : r.section_graph) {
        Json entry;
        entry["from"] = e.from;
        entry["letter"] = static_cast<int>(e.letter) + 1;
        entry["to"] = e.to;
        graph.push_back(std::move(entry));
    }
    out["section_graph"] = graph;
    Json n1 = Json::array();
    for (const N1Entry& e : r.n1) {
        Json entry;
        entry["element"] = e.element;
        entry["word"] = r.elements.empty() ? Json() : Json(format_or_identity(G, r.elements[e.element].word));
        entry["witness_cycle"] = vertex_json(e.witness_cycle);
        n1.push_back(std::move(entry));
    }
    out["n1"] = n1;
    Json ends = Json::array();
    for (const FixedEndVerdict& v : r.end_counts) {
        Json entry;
        entry["element"] = v.element;
        entry["kind"] = end_kind_name(v.kind);
        if (v.kind == EndCountKind::Finite) entry["count"] = v.count;
        if (v.branching_element) entry["branching_element"] = *v.branching_element;
        ends.push_back(std::move(entry));
    }
    out["end_counts"] = ends;
    out["digest_depth"] = r.digest_depth;
    return out;
}

Json jones_json(const JonesReport& r) {
    const char* verdict = "inconclusive";
    switch (r.verdict) {
        case JonesVerdict::Holds: verdict = "holds"; break;
        case JonesVerdict::FailsWithWitness: verdict = "fails_with_witness"; break;
        case JonesVerdict::Inconclusive: verdict = "inconclusive"; break;
    }
    Json out;
    out["verdict"] = verdict;
    if (r.verdict == JonesVerdict::FailsWithWitness) {
        out["witness"] = format_or_identity(r.nucleus.group.get(), r.witness);
    }
    if (!r.note.empty()) out["note"] = r.note;
    out["nucleus"] = nucleus_json(r.nucleus);
    out["martingale"] = martingale_json(r.martingale);
    out["transitivity"] = transitivity_json(r.transitivity);
    return out;
}

Json xn_json(const XnHistogram& h) {
    Json rows = Json::array();
    for (const auto& [value, count] : h.counts) {
        Json row;
        row["fixed"] = value;
        row["count"] = count;
        const auto it = h.mass.find(value);
        if (it != h.mass.end()) row["mass"] = rational_json(it->second);
        rows.push_back(std::move(row));
    }
    Json out;
    out["level"] = h.level;
    out["exact"] = h.exact;
    out["population"] = h.population;
    out["histogram"] = rows;
    return out;
}

Json conditional_json(const ConditionalResult& r) {
    Json out;
    out["base_level"] = r.base_level;
    out["extra_levels"] = r.extra_levels;
    out["fixed_count"] = r.fixed_count;
    out["exact"] = r.exact;
    out["empty_condition"] = r.empty_condition;
    out["bound"] = rational_json(r.bound);
    out["samples_total"] = r.samples_total;
    out["samples_in_condition"] = r.samples_in_condition;
    out["hits"] = r.hits;
    if (r.exact_value) out["value"] = rational_json(*r.exact_value);
    if (!r.empty_condition) {
        out["estimate"] = r.estimate;
        if (!r.exact) {
            out["std_error"] = r.std_error;
            out["wilson"] = Json::array({r.wilson_lo, r.wilson_hi});
        }
    }
    return out;
}

Json cylinder_json(const CylinderCheck& c) {
    Json out;
    out["base_level"] = c.base_level;
    out["section_level"] = c.section_level;
    out["vertex"] = vertex_json(c.vertex);
    out["lhs"] = rational_json(c.lhs);
    out["rhs"] = rational_json(c.rhs);
    out["lhs_count"] = c.lhs_count;
    out["equal"] = c.equal;
    return out;
}

std::string render_csv(const FppSeries& s) {
    std::ostringstream out;
    out << "level,exact_num,exact_den,mc_estimate,mc_stderr,samples,quotient_order\n";
    char buf[64];
    const auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const FppEntry& e : s.entries) {
        out << e.level << ',';
        if (e.exact_value) {
            out << e.exact_value->get_num().get_str() << ','
                << e.exact_value->get_den().get_str() << ',';
        } else {
            out << ",,";
        }
        if (e.mc) {
            out << fmt(e.mc->estimate) << ',' << fmt(e.mc->std_error) << ','
                << e.mc->samples << ',';
        } else if (!e.exact_value && e.enclosure) {
            out << fmt(e.enclosure->midpoint()) << ',' << fmt(e.enclosure->width() / 2)
                << ",,";
        } else {
            out << ",,,";
        }
        if (e.quotient_order) out << *e.quotient_order;
        out << '\n';
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path quotient_cache_path(const std::filesystem::path& dir,
                                          const GroupPresentation& G, int level) {
    const std::string text = G.canonical_text();
    return dir / (hex64(fnv1a(text.data(), text.size())) + "-L" + std::to_string(level) +
                  ".tfq");
}

void save_quotient_cache(const std::filesystem::path& file, const LevelQuotient& Q) {
    std::string blob;
    blob += "TFQ1";
    append_u64(blob, static_cast<uint64_t>(Q.degree()));
    append_u64(blob, static_cast<uint64_t>(Q.level()));
    uint64_t pres_hash = 0;
    if (Q.presentation()) {
        const std::string text = Q.presentation()->canonical_text();
        pres_hash = fnv1a(text.data(), text.size());
    }
    append_u64(blob, pres_hash);
    append_u64(blob, Q.order());
    append_u64(blob, Q.has_witnesses() ? 1 : 0);
    blob.append(reinterpret_cast<const char*>(Q.raw_keys().data()), Q.raw_keys().size());
    if (Q.has_witnesses()) {
        blob.append(reinterpret_cast<const char*>(Q.raw_witness_parent().data()),
                    Q.raw_witness_parent().size() * sizeof(uint32_t));
        blob.append(reinterpret_cast<const char*>(Q.raw_witness_gen().data()),
                    Q.raw_witness_gen().size() * sizeof(int32_t));
    }
    write_text_file(file, blob);
}

std::shared_ptr<const LevelQuotient> load_quotient_cache(
    const std::filesystem::path& file, std::shared_ptr<const GroupPresentation> G) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return nullptr;
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (blob.size() < 4 + 5 * 8 || blob.compare(0, 4, "TFQ1") != 0) return nullptr;
    const auto* p = reinterpret_cast<const uint8_t*>(blob.data()) + 4;
    const uint64_t degree = read_u64(p);
    const uint64_t level = read_u64(p + 8);
    const uint64_t pres_hash = read_u64(p + 16);
    const uint64_t count = read_u64(p + 24);
    const uint64_t witnessed = read_u64(p + 32);
    if (degree < 2 || degree > PermTable::kMaxDegree || level < 1 || level > 255) {
        return nullptr;
    }
    uint64_t expected_hash = 0;
    if (G) {
        const std::string text = G->canonical_text();
        expected_hash = fnv1a(text.data(), text.size());
    }
    if (pres_hash != expected_hash) return nullptr;
    const size_t key_size =
        TreeGeometry(static_cast<int>(degree), static_cast<int>(level)).label_count *
        static_cast<size_t>(bytes_per_label(static_cast<int>(degree)));
    size_t need = 4 + 5 * 8 + count * key_size;
    if (witnessed) need += count * (sizeof(uint32_t) + sizeof(int32_t));
    if (witnessed > 1 || blob.size() != need) return nullptr;
    const uint8_t* body = reinterpret_cast<const uint8_t*>(blob.data()) + 4 + 5 * 8;
    std::vector<uint8_t> keys(body, body + count * key_size);
    std::vector<uint32_t> parents;
    std::vector<int32_t> gens;
    if (witnessed) {
        const uint8_t* w = body + count * key_size;
        parents.resize(count);
        std::memcpy(parents.data(), w, count * sizeof(uint32_t));
        gens.resize(count);
        std::memcpy(gens.data(), w + count * sizeof(uint32_t), count * sizeof(int32_t));
    }
    try {
        return std::make_shared<const LevelQuotient>(
            static_cast<int>(degree), static_cast<int>(level), std::move(keys), std::move(G),
            std::move(parents), std::move(gens));
    } catch (const std::exception&) {
        return nullptr;
    }
}

}  // namespace treefpp
