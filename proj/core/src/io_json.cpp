#include "tomitafock/io_json.hpp"

#include <sstream>

#include <json.hpp>

#include "tomitafock/wordlang.hpp"

namespace tomitafock {

std::string vector_to_json(const Model& m, const BimoduleVector& v) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [b, c] : v.terms) {
        nlohmann::json t;
        t["src"] = m.fusion.labels[b.src];
        t["dst"] = m.fusion.labels[b.dst];
        t["letter"] = letter_name(m.fusion, b.letter);
        t["index"] = b.index;
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    return terms.dump();
}

std::string path_name(const FusionData& f, const FockPath& p) {
    if (p.degree() == 0) return "I_" + f.labels[p.base];
    std::string s;
    for (std::size_t k = 0; k < p.chain.size(); ++k) {
        const BasisVector& v = p.chain[k];
        if (k) s += "(x)";
        s += "[" + f.labels[v.src] + "<" + f.labels[v.dst] + ":" + letter_name(f, v.letter) +
             ":" + std::to_string(v.index) + "]";
    }
    return s;
}

std::string operator_to_json(const Model& m, const SparseOperator& t) {
    nlohmann::json j;
    j["dim"] = t.basis->size();
    j["depth"] = t.basis->depth;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [rc, v] : t.entries) {
        nlohmann::json e;
        e["row"] = rc.first;
        e["col"] = rc.second;
        e["re"] = v.real();
        e["im"] = v.imag();
        entries.push_back(e);
    }
    j["entries"] = entries;
    return j.dump();
}

std::string operator_to_csv(const Model& m, const SparseOperator& t) {
    std::ostringstream os;
    os << "row,col,re,im\n";
    os.precision(17);
    for (const auto& [rc, v] : t.entries)
        os << rc.first << "," << rc.second << "," << v.real() << "," << v.imag() << "\n";
    return os.str();
}

} // namespace tomitafock
