#include "ellipt/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ellipt {

namespace {

using nlohmann::json;

std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << "JSON parse error at line " << line << ", column " << col << ": " << e.what();
        throw JsonInputError(os.str(), line, col);
    }
}

Vec to_vec(const json& arr, const char* what) {
    if (!arr.is_array() || arr.empty()) {
        throw JsonInputError(std::string(what) + " must be a nonempty array");
    }
    Vec v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw JsonInputError(std::string(what) + " must be numeric");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JsonInputError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

EllipticPolytope read_ellipse_set(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("ellipses") || !j["ellipses"].is_array() || j["ellipses"].empty()) {
        throw JsonInputError("expected a nonempty 'ellipses' array");
    }
    const int dim = j.contains("dim") ? j["dim"].get<int>() : -1;
    std::vector<Ellipse> ellipses;
    for (const json& je : j["ellipses"]) {
        Vec a = to_vec(je.at("a"), "ellipse field 'a'");
        Vec b = to_vec(je.at("b"), "ellipse field 'b'");
        if (a.size() != b.size() || (dim > 0 && a.size() != dim)) {
            throw JsonInputError("ellipse radii must have length 'dim'");
        }
        ellipses.emplace_back(std::move(a), std::move(b));
    }
    return EllipticPolytope(std::move(ellipses));
}

EllipticPolytope read_ellipse_set_file(const std::string& path) {
    return read_ellipse_set(slurp(path));
}

std::string write_ellipse_set(const EllipticPolytope& p, int indent) {
    json j;
    j["dim"] = p.dim();
    j["ellipses"] = json::array();
    for (const Ellipse& e : p.ellipses()) {
        json je;
        je["a"] = std::vector<double>(e.a().data(), e.a().data() + e.a().size());
        je["b"] = std::vector<double>(e.b().data(), e.b().data() + e.b().size());
        j["ellipses"].push_back(je);
    }
    return j.dump(indent);
}

MatrixFamily read_matrix_family(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("matrices") || !j["matrices"].is_array() || j["matrices"].empty()) {
        throw JsonInputError("expected a nonempty 'matrices' array");
    }
    MatrixFamily fam;
    for (const json& jm : j["matrices"]) {
        if (!jm.is_array() || jm.empty()) throw JsonInputError("matrix must be an array of rows");
        const size_t d = jm.size();
        Mat A(d, d);
        for (size_t r = 0; r < d; ++r) {
            if (!jm[r].is_array() || jm[r].size() != d) {
                throw JsonInputError("matrix rows must be square");
            }
            for (size_t c = 0; c < d; ++c) A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = jm[r][c].get<double>();
        }
        fam.matrices.push_back(std::move(A));
    }
    fam.validate();
    return fam;
}

MatrixFamily read_matrix_family_file(const std::string& path) {
    return read_matrix_family(slurp(path));
}

std::string write_matrix_family(const MatrixFamily& fam, int indent) {
    json j;
    j["matrices"] = json::array();
    for (const Mat& A : fam.matrices) {
        json jm = json::array();
        for (Eigen::Index r = 0; r < A.rows(); ++r) {
            jm.push_back(std::vector<double>(A.row(r).begin(), A.row(r).end()));
        }
        j["matrices"].push_back(jm);
    }
    return j.dump(indent);
}

}  // namespace ellipt
