#include "clucert/dissimilarity.hpp"

#include "csv_util.hpp"

#include <cmath>
#include <fstream>

namespace clucert {

namespace {

void require_shape(const Dataset& data) {
    if (data.n() < 2) throw_argument("need at least two individuals");
    if (data.p() < 1) throw_argument("need at least one feature");
}

}  // namespace

DissimilarityMatrix euclidean(const Dataset& data) {
    require_shape(data);
    const Index n = data.n();
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = (data.features.row(i) - data.features.row(j)).norm();
    return DissimilarityMatrix(std::move(d));
}

DissimilarityMatrix simple_matching(const Dataset& data) {
    require_shape(data);
    if (data.kind != DataKind::binary)
        throw_argument("simple matching distance is defined for binary data");
    data.validate();
    const Index n = data.n();
    const Index p = data.p();
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            Index mismatches = 0;
            for (Index k = 0; k < p; ++k)
                if (data.features(i, k) != data.features(j, k)) ++mismatches;
            d(i, j) = d(j, i) = static_cast<Scalar>(mismatches) / static_cast<Scalar>(p);
        }
    return DissimilarityMatrix(std::move(d));
}

DissimilarityMatrix chord(const Dataset& data) {
    require_shape(data);
    const Index n = data.n();
    Matrix unit(n, data.p());
    for (Index i = 0; i < n; ++i) {
        const Scalar norm = data.features.row(i).norm();
        if (norm == 0.0)
            throw_validation("chord distance undefined: row " + std::to_string(i + 1) +
                             " has zero norm");
        unit.row(i) = data.features.row(i) / norm;
    }
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = (unit.row(i) - unit.row(j)).norm();
    return DissimilarityMatrix(std::move(d));
}

const char* dissimilarity_name(DissimilarityKind kind) {
    switch (kind) {
        case DissimilarityKind::euclidean: return "euclidean";
        case DissimilarityKind::smd: return "smd";
        case DissimilarityKind::chord: return "chord";
    }
    return "?";
}

DissimilarityKind dissimilarity_from_name(const std::string& name) {
    if (name == "euclidean") return DissimilarityKind::euclidean;
    if (name == "smd") return DissimilarityKind::smd;
    if (name == "chord") return DissimilarityKind::chord;
    throw_argument("unknown dissimilarity '" + name + "'");
}

DissimilarityMatrix compute_dissimilarity(const Dataset& data, DissimilarityKind kind) {
    switch (kind) {
        case DissimilarityKind::euclidean: return euclidean(data);
        case DissimilarityKind::smd: return simple_matching(data);
        case DissimilarityKind::chord: return chord(data);
    }
    throw_argument("unknown dissimilarity kind");
}

// ---------------------------------------------------------------------------
// Matrix CSV
// ---------------------------------------------------------------------------

DissimilarityMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_ingestion("cannot open matrix file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw_ingestion("empty matrix file '" + path.string() + "'");
    const std::string header = detail::trim(line);
    if (header.rfind("n=", 0) != 0)
        throw_ingestion("line 1: expected 'n=<count>' header, got '" + header + "'");
    const long n = detail::parse_int(header.substr(2), 1);
    if (n < 1) throw_ingestion("line 1: individual count must be positive");

    Matrix d(n, n);
    for (long i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw_ingestion("line " + std::to_string(i + 2) + ": unexpected end of file");
        const auto cells = detail::split_csv(line);
        if (static_cast<long>(cells.size()) != n)
            throw_ingestion("line " + std::to_string(i + 2) + ": expected " + std::to_string(n) +
                            " values, got " + std::to_string(cells.size()));
        for (long j = 0; j < n; ++j)
            d(i, j) = detail::parse_double(cells[static_cast<std::size_t>(j)],
                                           static_cast<int>(i + 2));
    }
    return DissimilarityMatrix::from_near_symmetric(std::move(d));
}

void save_matrix(const DissimilarityMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_ingestion("cannot write matrix file '" + path.string() + "'");
    const Index n = m.size();
    out << "n=" << n << "\n";
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (j) out << ',';
            out << detail::fmt_full(m(i, j));
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Dataset CSV
// ---------------------------------------------------------------------------

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_ingestion("cannot open dataset file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw_ingestion("empty dataset file '" + path.string() + "'");

    const auto header = detail::split_csv(detail::trim(line));
    long group_col = -1, hybrid_col = -1;
    std::vector<long> feature_cols;
    for (long c = 0; c < static_cast<long>(header.size()); ++c) {
        const std::string name = detail::trim(header[static_cast<std::size_t>(c)]);
        if (name == "group")
            group_col = c;
        else if (name == "hybrid")
            hybrid_col = c;
        else
            feature_cols.push_back(c);
    }
    if (feature_cols.empty()) throw_ingestion("dataset has no feature columns");

    std::vector<std::vector<Scalar>> rows;
    std::vector<int> groups;
    std::optional<Index> hybrid;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != header.size())
            throw_ingestion("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));
        std::vector<Scalar> row;
        row.reserve(feature_cols.size());
        for (long c : feature_cols)
            row.push_back(detail::parse_double(cells[static_cast<std::size_t>(c)], line_no));
        rows.push_back(std::move(row));
        if (group_col >= 0)
            groups.push_back(static_cast<int>(
                detail::parse_int(cells[static_cast<std::size_t>(group_col)], line_no)));
        if (hybrid_col >= 0) {
            const std::string flag =
                detail::trim(cells[static_cast<std::size_t>(hybrid_col)]);
            if (flag == "1" || flag == "true") {
                if (hybrid)
                    throw_ingestion("line " + std::to_string(line_no) +
                                    ": more than one hybrid individual flagged");
                hybrid = static_cast<Index>(rows.size()) - 1;
            } else if (flag != "0" && flag != "false") {
                throw_ingestion("line " + std::to_string(line_no) +
                                ": hybrid flag must be 0/1/true/false");
            }
        }
    }
    if (rows.empty()) throw_ingestion("dataset '" + path.string() + "' has no data rows");

    Dataset data;
    data.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(feature_cols.size()));
    bool all_binary = true;
    for (Index i = 0; i < data.features.rows(); ++i)
        for (Index j = 0; j < data.features.cols(); ++j) {
            const Scalar x = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            data.features(i, j) = x;
            if (x != 0.0 && x != 1.0) all_binary = false;
        }
    data.kind = all_binary ? DataKind::binary : DataKind::continuous;
    data.groups = std::move(groups);
    data.hybrid = hybrid;
    data.validate();
    return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_ingestion("cannot write dataset file '" + path.string() + "'");
    for (Index j = 0; j < data.p(); ++j) {
        if (j) out << ',';
        out << "x" << (j + 1);
    }
    if (data.has_groups()) out << ",group";
    if (data.hybrid) out << ",hybrid";
    out << "\n";
    for (Index i = 0; i < data.n(); ++i) {
        for (Index j = 0; j < data.p(); ++j) {
            if (j) out << ',';
            out << detail::fmt_full(data.features(i, j));
        }
        if (data.has_groups()) out << ',' << data.groups[static_cast<std::size_t>(i)];
        if (data.hybrid) out << ',' << (*data.hybrid == i ? 1 : 0);
        out << "\n";
    }
}

}  // namespace clucert
