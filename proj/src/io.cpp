#include "weakform/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace weakform {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int prec = 1; prec <= 16; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

void write_field_csv(const SampledField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
    if (!field.is_2d()) {
        os << "x,value\n";
        for (int i = 0; i < field.gx.n; ++i)
            os << format_double(field.gx.point(i)) << ',' << format_double(field.values(i, 0))
               << '\n';
    } else {
        os << "x,y,value\n";
        for (int i = 0; i < field.gx.n; ++i)
            for (int j = 0; j < field.gy->n; ++j)
                os << format_double(field.gx.point(i)) << ',' << format_double(field.gy->point(j))
                   << ',' << format_double(field.values(i, j)) << '\n';
    }
    if (!os) throw std::runtime_error("write_field_csv: failed writing " + path);
}

namespace {

std::vector<std::vector<double>> read_csv_rows(const std::string& path, int expected_cols) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    std::getline(is, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (static_cast<int>(row.size()) != expected_cols)
            throw std::runtime_error("read_csv: malformed row in " + path);
        rows.push_back(std::move(row));
    }
    return rows;
}

Grid1D grid_from_sorted_unique(const std::vector<double>& vals) {
    if (vals.size() < 2) throw std::runtime_error("read_field_csv: degenerate grid");
    const double dx = vals[1] - vals[0];
    return Grid1D(vals[0], dx, static_cast<int>(vals.size()));
}

}  // namespace

SampledField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::string header;
    std::getline(is, header);
    const bool two_d = header.find("x,y,") == 0;
    is.close();

    if (!two_d) {
        auto rows = read_csv_rows(path, 2);
        std::vector<double> xs;
        VectorXd vals(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            xs.push_back(rows[i][0]);
            vals[static_cast<int>(i)] = rows[i][1];
        }
        return SampledField(grid_from_sorted_unique(xs), vals);
    }
    auto rows = read_csv_rows(path, 3);
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (xs.empty() || r[0] > xs.back() + 1e-15) xs.push_back(r[0]);
    }
    const size_t ny = rows.size() / xs.size();
    for (size_t j = 0; j < ny; ++j) ys.push_back(rows[j][1]);
    ArrayXXd vals(xs.size(), ny);
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ny; ++j) vals(i, j) = rows[i * ny + j][2];
    return SampledField(grid_from_sorted_unique(xs), grid_from_sorted_unique(ys), vals);
}

void write_measure_csv(const ExplorationMeasure& measure, const std::string& path,
                       const std::string& variable_name) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_measure_csv: cannot open " + path);
    os << variable_name << ",density\n";
    for (int i = 0; i < measure.grid.n; ++i)
        os << format_double(measure.grid.point(i)) << ',' << format_double(measure.density[i])
           << '\n';
}

void write_ensemble_csv(const ParticleEnsemble& ensemble, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_ensemble_csv: cannot open " + path);
    os << "m,l,i";
    for (int k = 1; k <= ensemble.d; ++k) os << ",x" << k;
    os << '\n';
    for (int m = 0; m < ensemble.M; ++m)
        for (int l = 0; l < ensemble.L; ++l)
            for (int i = 0; i < ensemble.N; ++i) {
                os << m << ',' << l << ',' << i;
                for (int k = 0; k < ensemble.d; ++k)
                    os << ',' << format_double(ensemble.at(m, l)(i, k));
                os << '\n';
            }
    if (!os) throw std::runtime_error("write_ensemble_csv: failed writing " + path);
}

ParticleEnsemble read_ensemble_csv(const std::string& path, double dt, double t0) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_ensemble_csv: cannot open " + path);
    std::string header;
    std::getline(is, header);
    int d = 0;
    for (size_t pos = header.find(",x"); pos != std::string::npos;
         pos = header.find(",x", pos + 1))
        ++d;
    if (d < 1) throw std::runtime_error("read_ensemble_csv: no coordinate columns in " + path);

    auto rows = read_csv_rows(path, 3 + d);
    int M = 0, L = 0, N = 0;
    for (const auto& r : rows) {
        M = std::max(M, static_cast<int>(r[0]) + 1);
        L = std::max(L, static_cast<int>(r[1]) + 1);
        N = std::max(N, static_cast<int>(r[2]) + 1);
    }
    ParticleEnsemble ens;
    ens.M = M;
    ens.L = L;
    ens.N = N;
    ens.d = d;
    ens.dt = dt;
    ens.t0 = t0;
    ens.slices.assign(static_cast<size_t>(M) * L, MatrixXd::Zero(N, d));
    for (const auto& r : rows) {
        const int m = static_cast<int>(r[0]), l = static_cast<int>(r[1]),
                  i = static_cast<int>(r[2]);
        for (int k = 0; k < d; ++k) ens.at(m, l)(i, k) = r[3 + k];
    }
    return ens;
}

nlohmann::json report_to_json(const EstimateReport& report) {
    nlohmann::json j;
    j["coefficients"] = std::vector<double>(report.coefficients.begin(),
                                            report.coefficients.end());
    if (report.lambda_used) j["lambda_used"] = *report.lambda_used;
    j["condition_number"] = report.condition_number;
    j["residual"] = report.residual;
    j["spectrum"] = std::vector<double>(report.spectrum.begin(), report.spectrum.end());
    return j;
}

nlohmann::json spectrum_to_json(const SpectrumReport& report) {
    nlohmann::json j;
    j["eigenvalues"] = std::vector<double>(report.eigenvalues.begin(), report.eigenvalues.end());
    if (report.decay_index)
        j["decay_index"] = *report.decay_index;
    else
        j["decay_index"] = nullptr;
    return j;
}

}  // namespace weakform
