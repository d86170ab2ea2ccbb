#pragma once

// Text serialization: the polytope document (a self-describing key/value
// format, 17 significant digits so coordinates round-trip bit-exactly) and
// OFF/OBJ mesh export.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ssd/geom.hpp"
#include "ssd/polytope.hpp"
#include "ssd/search.hpp"
#include "ssd/verify.hpp"

namespace ssd {

inline constexpr int kDocumentVersion = 1;

struct PolytopeDocument {
    int format_version = kDocumentVersion;
    std::string provenance;
    Polytope poly;
};

namespace doc_detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace doc_detail

inline void write_document(std::ostream& os, const PolytopeDocument& doc) {
    using doc_detail::fmt17;
    const Polytope& p = doc.poly;
    os << "ssd-polytope " << doc.format_version << "\n";
    if (!doc.provenance.empty()) os << "provenance: " << doc.provenance << "\n";
    if (p.r == p.r) os << "r: " << fmt17(p.r) << "\n";
    if (p.alpha == p.alpha) os << "alpha: " << fmt17(p.alpha) << "\n";
    os << "vertices: " << p.vertices.size() << "\n";
    for (const Vec3& v : p.vertices)
        os << "v " << fmt17(v.x) << " " << fmt17(v.y) << " " << fmt17(v.z) << "\n";
    os << "faces: " << p.faces.size() << "\n";
    for (const auto& f : p.faces) {
        os << "f";
        for (int vi : f) os << " " << vi;
        os << "\n";
    }
    if (p.has_sigma()) {
        os << "sigma:";
        for (int s : p.sigma) os << " " << s;
        os << "\n";
    }
    os << "end\n";
}

inline std::string document_to_string(const PolytopeDocument& doc) {
    std::ostringstream os;
    write_document(os, doc);
    return os.str();
}

inline PolytopeDocument read_document(std::istream& is) {
    PolytopeDocument doc;
    std::string line;
    if (!std::getline(is, line)) throw ParseError("document: empty input");
    {
        std::istringstream ls(line);
        std::string magic;
        ls >> magic >> doc.format_version;
        if (magic != "ssd-polytope" || doc.format_version < 1)
            throw ParseError("document: bad header '" + line + "'");
    }
    Polytope& p = doc.poly;
    std::size_t nv = 0, nf = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "end") break;
        if (key == "provenance:") {
            auto pos = line.find(':');
            doc.provenance = line.substr(pos + 1);
            if (!doc.provenance.empty() && doc.provenance.front() == ' ')
                doc.provenance.erase(doc.provenance.begin());
        } else if (key == "r:") {
            ls >> p.r;
        } else if (key == "alpha:") {
            ls >> p.alpha;
        } else if (key == "vertices:") {
            ls >> nv;
        } else if (key == "faces:") {
            ls >> nf;
        } else if (key == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) throw ParseError("document: bad vertex line");
            p.vertices.push_back(v);
        } else if (key == "f") {
            std::vector<int> face;
            int idx;
            while (ls >> idx) face.push_back(idx);
            if (face.size() < 3) throw ParseError("document: face with fewer than 3 vertices");
            p.faces.push_back(std::move(face));
        } else if (key == "sigma:") {
            int s;
            while (ls >> s) p.sigma.push_back(s);
        } else {
            throw ParseError("document: unknown key '" + key + "'");
        }
    }
    if (nv != p.vertices.size()) throw ParseError("document: vertex count mismatch");
    if (nf != p.faces.size()) throw ParseError("document: face count mismatch");
    const int n = static_cast<int>(p.vertices.size());
    for (const auto& f : p.faces)
        for (int vi : f)
            if (vi < 0 || vi >= n) throw ParseError("document: face index out of range");
    if (p.has_sigma()) {
        if (p.sigma.size() != p.vertices.size())
            throw ParseError("document: sigma length mismatch");
        for (int s : p.sigma)
            if (s < 0 || s >= static_cast<int>(p.faces.size()))
                throw ParseError("document: sigma index out of range");
    }
    return doc;
}

inline PolytopeDocument document_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_document(is);
}

// Standard ASCII OFF: counts line, vertex lines, then per-face index lines.
inline void write_off(std::ostream& os, const Polytope& p) {
    using doc_detail::fmt17;
    os << "OFF\n";
    os << p.vertices.size() << " " << p.faces.size() << " " << edge_set(p).size() << "\n";
    for (const Vec3& v : p.vertices)
        os << fmt17(v.x) << " " << fmt17(v.y) << " " << fmt17(v.z) << "\n";
    for (const auto& f : p.faces) {
        os << f.size();
        for (int vi : f) os << " " << vi;
        os << "\n";
    }
}

inline void write_obj(std::ostream& os, const Polytope& p) {
    using doc_detail::fmt17;
    for (const Vec3& v : p.vertices)
        os << "v " << fmt17(v.x) << " " << fmt17(v.y) << " " << fmt17(v.z) << "\n";
    for (const auto& f : p.faces) {
        os << "f";
        for (int vi : f) os << " " << vi + 1;
        os << "\n";
    }
}

// Human-readable verification report.
inline void write_report_text(std::ostream& os, const SsdReport& rep) {
    using doc_detail::fmt17;
    os << "ssd verification report\n"
       << "  r:                 " << fmt17(rep.r_used) << "\n"
       << "  alpha:             " << fmt17(rep.alpha_used) << "\n"
       << "  inscribed_dev:     " << fmt17(rep.inscribed_dev) << "\n"
       << "  tangency_dev:      " << fmt17(rep.tangency_dev) << "\n"
       << "  orthogonality_dev: " << fmt17(rep.orthogonality_dev) << "\n"
       << "  diagonal_dev:      " << fmt17(rep.diagonal_dev) << "\n"
       << "  product_dev:       " << fmt17(rep.product_dev) << "\n"
       << "  sigma_valid:       " << (rep.sigma_valid ? "yes" : "no") << "\n"
       << "  alpha_bound_ok:    " << (rep.alpha_bound_ok ? "yes" : "no") << "\n"
       << "  passed:            " << (rep.passed ? "yes" : "no") << "\n";
}

// Structured key: value form of the same report.
inline void write_report_keyvalue(std::ostream& os, const SsdReport& rep) {
    using doc_detail::fmt17;
    os << "report.r: " << fmt17(rep.r_used) << "\n"
       << "report.alpha: " << fmt17(rep.alpha_used) << "\n"
       << "report.inscribed_dev: " << fmt17(rep.inscribed_dev) << "\n"
       << "report.tangency_dev: " << fmt17(rep.tangency_dev) << "\n"
       << "report.orthogonality_dev: " << fmt17(rep.orthogonality_dev) << "\n"
       << "report.diagonal_dev: " << fmt17(rep.diagonal_dev) << "\n"
       << "report.product_dev: " << fmt17(rep.product_dev) << "\n"
       << "report.sigma_valid: " << (rep.sigma_valid ? 1 : 0) << "\n"
       << "report.alpha_bound_ok: " << (rep.alpha_bound_ok ? 1 : 0) << "\n"
       << "report.passed: " << (rep.passed ? 1 : 0) << "\n";
}

// Search trace as a plain-text table (angles reported in degrees) or as
// key: value records.
inline void write_trace_table(std::ostream& os, const SearchResult& res, bool structured = false) {
    using doc_detail::fmt17;
    if (!structured) os << "step  kappa_deg  lambda_deg  r  error\n";
    for (const SearchStep& s : res.trace) {
        if (structured) {
            os << "trace." << s.step << ": " << fmt17(rad2deg(s.kappa)) << " "
               << fmt17(rad2deg(s.lambda)) << " " << fmt17(s.r) << " " << fmt17(s.error) << "\n";
        } else {
            os << s.step << " " << fmt17(rad2deg(s.kappa)) << " " << fmt17(rad2deg(s.lambda))
               << " " << fmt17(s.r) << " " << fmt17(s.error) << "\n";
        }
    }
}

}  // namespace ssd
