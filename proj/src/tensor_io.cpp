#include "chebsolve/tensor_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace chebsolve {

namespace {
using nlohmann::json;
}

ChebPoly read_tensor(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("tensor: invalid document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dims") || !doc.contains("degrees") ||
        !doc.contains("coeffs"))
        throw InputError("tensor: expected an object with dims, degrees and coeffs");
    if (!doc["dims"].is_number_integer())
        throw InputError("tensor: dims must be an integer");
    const int n = doc["dims"].get<int>();
    if (n < 1) throw InputError("tensor: dims must be positive");
    if (!doc["degrees"].is_array() || static_cast<int>(doc["degrees"].size()) != n)
        throw InputError("tensor: degrees must list one degree per dimension");
    std::vector<int> degrees(static_cast<std::size_t>(n));
    Eigen::Index total = 1;
    for (int i = 0; i < n; ++i) {
        const json& d = doc["degrees"][static_cast<std::size_t>(i)];
        if (!d.is_number_integer() || d.get<int>() < 0)
            throw InputError("tensor: degrees must be nonnegative integers");
        degrees[static_cast<std::size_t>(i)] = d.get<int>();
        total *= degrees[static_cast<std::size_t>(i)] + 1;
    }
    const json& cs = doc["coeffs"];
    if (!cs.is_array() || static_cast<Eigen::Index>(cs.size()) != total)
        throw InputError("tensor: coeffs must hold " + std::to_string(total) + " values");
    Eigen::VectorXd coeffs(total);
    for (Eigen::Index i = 0; i < total; ++i) {
        const json& c = cs[static_cast<std::size_t>(i)];
        if (!c.is_number()) throw InputError("tensor: coeffs must be numbers");
        coeffs[i] = c.get<double>();
        if (!std::isfinite(coeffs[i])) throw InputError("tensor: coeffs must be finite");
    }
    return ChebPoly(degrees, std::move(coeffs));
}

ChebPoly read_tensor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("tensor: cannot open '" + path + "'");
    return read_tensor(in);
}

void write_tensor(std::ostream& out, const ChebPoly& p) {
    json doc;
    doc["dims"] = p.dims();
    doc["degrees"] = p.degrees();
    json cs = json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) cs.push_back(p.coeffs()[i]);
    doc["coeffs"] = std::move(cs);
    out << doc.dump() << "\n";
}

void write_tensor_file(const std::string& path, const ChebPoly& p) {
    std::ofstream out(path);
    if (!out) throw InputError("tensor: cannot open '" + path + "' for writing");
    write_tensor(out, p);
    if (!out) throw InputError("tensor: write to '" + path + "' failed");
}

}  // namespace chebsolve
