#include "gifslab/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gifslab {

json to_json(const CompactNet& net) {
    json pts = json::array();
    for (const Point& p : net.points()) pts.push_back(p.coords());
    return json{{"dim", net.dim()}, {"resolution", net.resolution()}, {"points", std::move(pts)}};
}

CompactNet net_from_json(const json& j) {
    std::vector<Point> pts;
    for (const auto& row : j.at("points")) pts.emplace_back(row.get<std::vector<double>>());
    CompactNet net(std::move(pts), j.at("resolution").get<double>());
    if (net.dim() != j.at("dim").get<std::size_t>())
        throw std::invalid_argument("net_from_json: dim field does not match the points");
    return net;
}

json to_json(const ArityProfile& profile) { return json{{"arities", profile.arities()}}; }

ArityProfile profile_from_json(const json& j) {
    return ArityProfile(j.at("arities").get<std::vector<std::uint32_t>>());
}

json to_json(const Address& a) { return json(a.digits); }

Address address_from_json(const json& j) {
    return Address{j.get<std::vector<std::uint32_t>>()};
}

json to_json(const CellTree& tree) {
    json phi = json::object();
    for (const auto& [n, addr] : tree.phi().assignment()) phi[std::to_string(n)] = addr.digits;
    json cells = json::object();
    for (const auto& [addr, iv] : tree.cells()) cells[addr.str()] = {iv.lo, iv.hi};
    return json{{"ambient", {tree.ambient().lo, tree.ambient().hi}},
                {"q", tree.q()},
                {"arities", tree.profile().arities()},
                {"b", tree.diam_bounds()},
                {"phi", std::move(phi)},
                {"cells", std::move(cells)}};
}

CellTree tree_from_json(const json& j) {
    ArityProfile profile(j.at("arities").get<std::vector<std::uint32_t>>());
    Interval ambient{j.at("ambient")[0].get<double>(), j.at("ambient")[1].get<double>()};
    std::map<std::uint64_t, Address> phi;
    for (const auto& [key, digits] : j.at("phi").items())
        phi.emplace(std::stoull(key), Address{digits.get<std::vector<std::uint32_t>>()});
    std::map<Address, Interval> cells;
    for (const auto& [key, iv] : j.at("cells").items()) {
        Address a;
        std::istringstream ss(key);
        std::string part;
        while (std::getline(ss, part, '.')) a.digits.push_back(std::stoul(part));
        cells.emplace(std::move(a), Interval{iv[0].get<double>(), iv[1].get<double>()});
    }
    return CellTree(j.at("q").get<double>(), std::move(profile), ambient,
                    j.at("b").get<std::vector<double>>(), IndexingFunction(std::move(phi)),
                    std::move(cells));
}

namespace {

json to_json(const ConditionResult& r, const char* label) {
    return json{{"condition", label}, {"pass", r.pass}, {"margin", r.margin}, {"detail", r.detail}};
}

}  // namespace

json to_json(const VerifyReport& report) {
    return json{{"all_pass", report.all_pass()},
                {"strict_threshold", report.strict_threshold},
                {"conditions",
                 {to_json(report.growth, "i:growth"), to_json(report.nesting, "ii:nesting"),
                  to_json(report.diameter, "iii:diameter"),
                  to_json(report.separation, "iv:separation"),
                  to_json(report.odd_level, "v:odd-level")}}};
}

json serialize_inf_system(const GifsInfSystem& sys, const std::string& variant, double r) {
    json maps = json::array();
    for (const GifsInfMap& f : sys.maps()) {
        json m{{"lip", f.declared_lip()}};
        switch (f.kind()) {
            case GifsInfMap::Kind::AddressTransform:
                m["kind"] = "transform";
                m["prefix"] = f.prefix().digits;
                break;
            case GifsInfMap::Kind::PiecewiseUnion:
                m["kind"] = "piecewise";
                m["prefix"] = f.prefix().digits;
                m["anchor"] = f.anchor().coords();
                break;
            case GifsInfMap::Kind::Constant:
                m["kind"] = "constant";
                m["value"] = f.anchor().coords();
                break;
        }
        maps.push_back(std::move(m));
    }
    json out{{"kind", "gifs_inf"},
             {"variant", variant},
             {"tree", to_json(sys.tree())},
             {"maps", std::move(maps)},
             {"c1", "automatic (continuous self-maps of a compact set)"}};
    if (variant != "witness") out["r"] = r;
    if (sys.extra()) out["extra"] = to_json(*sys.extra());
    return out;
}

GifsInfSystem inf_system_from_json(const json& j) {
    if (j.at("kind").get<std::string>() != "gifs_inf")
        throw std::invalid_argument("inf_system_from_json: kind must be gifs_inf");
    auto tree = std::make_shared<CellTree>(tree_from_json(j.at("tree")));
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "witness") return build_witness_system(tree);
    if (variant == "refined") return build_refined_system(tree, j.at("r").get<double>());
    if (variant == "union")
        return build_union_system(tree, net_from_json(j.at("extra")), j.at("r").get<double>());
    throw std::invalid_argument("inf_system_from_json: unknown variant " + variant);
}

json to_json(const LipschitzCertificate& cert) {
    json maps = json::array();
    for (const MapCertificate& m : cert.maps) {
        maps.push_back(json{{"map", m.map_name},
                            {"declared_bound", m.declared_bound},
                            {"max_ratio", m.max_ratio},
                            {"pairs_checked", m.pairs_checked},
                            {"violations", m.violations}});
    }
    return json{{"pass", cert.pass()},
                {"certified_bound", cert.certified_bound()},
                {"maps", std::move(maps)}};
}

json to_json(const ExtendedSystem& sys) {
    json maps = json::array();
    for (const ExtendedMap& m : sys.maps()) {
        json anchors = json::array();
        for (const auto& a : m.sampled().anchors()) {
            json in = json::array();
            for (std::uint32_t slot : a.slots) {
                // report the class by the digits of its cell prefix: slot
                // order matches the lexicographic class enumeration
                in.push_back(slot);
            }
            anchors.push_back(json{{"in", std::move(in)}, {"out", a.output.coords()}});
        }
        maps.push_back(json{{"prefix", m.base().prefix().digits},
                            {"base_lip", m.base_lip()},
                            {"ambient_lip", m.ambient_lip()},
                            {"anchors", std::move(anchors)}});
    }
    return json{{"kind", "extended"},
                {"dim", sys.dim()},
                {"contraction", sys.contraction()},
                {"tree", to_json(sys.tree())},
                {"maps", std::move(maps)}};
}

IfsSystem ifs_from_json(const json& j) {
    if (j.at("kind").get<std::string>() != "ifs")
        throw std::invalid_argument("ifs_from_json: kind must be ifs");
    std::vector<IfsMap> maps;
    for (const auto& m : j.at("maps")) {
        const double scale = m.at("scale").get<double>();
        const double offset = m.at("offset").get<double>();
        maps.push_back({[scale, offset](const Point& x) {
                            return Point::scalar(scale * x[0] + offset);
                        },
                        std::abs(scale)});
    }
    return IfsSystem(std::move(maps));
}

GifsSystem gifs_from_json(const json& j) {
    if (j.at("kind").get<std::string>() != "gifs")
        throw std::invalid_argument("gifs_from_json: kind must be gifs");
    const auto order = j.at("order").get<std::size_t>();
    std::vector<GifsMap> maps;
    for (const auto& m : j.at("maps")) {
        const auto coeffs = m.at("coeffs").get<std::vector<double>>();
        const double offset = m.at("offset").get<double>();
        if (coeffs.size() != order)
            throw std::invalid_argument("gifs_from_json: coefficient count must equal the order");
        double lip = 0.0;
        for (double c : coeffs) lip += std::abs(c);
        maps.push_back({[coeffs, offset](const std::vector<Point>& xs) {
                            double v = offset;
                            for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * xs[i][0];
                            return Point::scalar(v);
                        },
                        lip});
    }
    return GifsSystem(order, std::move(maps));
}

std::string net_to_csv(const CompactNet& net) {
    std::ostringstream os;
    os.precision(17);
    for (const Point& p : net.points()) {
        for (std::size_t i = 0; i < p.dim(); ++i) {
            if (i) os << ',';
            os << p[i];
        }
        os << '\n';
    }
    return os.str();
}

std::string config_hash(const json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace gifslab
