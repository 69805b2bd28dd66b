#include "fermistab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fermistab {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'B', '1'};

void put_u32(std::ostream& os, uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void put_u64(std::ostream& os, uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

uint32_t take_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) {
        throw std::runtime_error("truncated batch file");
    }
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
}

uint64_t take_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
        throw std::runtime_error("truncated batch file");
    }
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_table(std::ostream& os, const BitTable& t) {
    for (std::size_t j = 0; j < t.num_columns(); ++j) {
        const uint64_t* col = t.column(j);
        for (std::size_t w = 0; w < t.words_per_column(); ++w) put_u64(os, col[w]);
    }
}

void take_table(std::istream& is, BitTable& t) {
    for (std::size_t j = 0; j < t.num_columns(); ++j) {
        uint64_t* col = t.column(j);
        for (std::size_t w = 0; w < t.words_per_column(); ++w) col[w] = take_u64(is);
    }
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_batch(const std::string& path, const SampleResult& samples,
                 uint32_t vqed_b_start, uint64_t seed) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::size_t shots =
        std::max(samples.detectors.num_shots(), samples.observables.num_shots());
    os.write(kMagic, 4);
    put_u64(os, shots);
    put_u32(os, static_cast<uint32_t>(samples.detectors.num_columns()));
    put_u32(os, static_cast<uint32_t>(samples.observables.num_columns()));
    put_u32(os, vqed_b_start);
    put_u64(os, seed);
    put_table(os, samples.detectors);
    put_table(os, samples.observables);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

BatchFile read_batch(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open batch file '" + path + "'");
    char magic[4];
    if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
        throw std::runtime_error("'" + path + "' is not an FSB1 batch file");
    }
    BatchFile out;
    uint64_t shots = take_u64(is);
    uint32_t n_det = take_u32(is);
    uint32_t n_obs = take_u32(is);
    out.vqed_b_start = take_u32(is);
    out.seed = take_u64(is);
    out.samples.detectors = BitTable(shots, n_det);
    out.samples.observables = BitTable(shots, n_obs);
    take_table(is, out.samples.detectors);
    take_table(is, out.samples.observables);
    return out;
}

std::string csv_header() {
    return "encoding,L,circuit,depth,readout,mitigation,model,p,shots,seed,"
           "n_samp,n_discard,R_det,n_post,R_obs_any,R_obs_worst,"
           "ci_low,ci_high,excluded,vqed_est,vqed_var";
}

std::string csv_line(const ResultRow& row) {
    const MetricsReport& m = row.metrics;
    std::ostringstream os;
    os << row.encoding << ',' << row.lattice_side << ',' << row.circuit << ','
       << num(row.depth) << ',' << row.readout << ',' << row.mitigation << ','
       << row.model << ',' << num(row.p) << ',' << row.shots << ',' << row.seed
       << ',' << m.n_samp << ',' << m.n_discard << ',' << num(m.r_det) << ','
       << m.n_post << ',' << num(m.r_obs_any) << ',' << num(m.r_obs_worst) << ','
       << num(m.ci_low) << ',' << num(m.ci_high) << ',' << (m.excluded ? 1 : 0)
       << ',' << (m.vqed_est ? num(*m.vqed_est) : std::string()) << ','
       << (m.vqed_var ? num(*m.vqed_var) : std::string());
    return os.str();
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream os(path, std::ios::binary);  // binary: no CRLF translation
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << csv_header() << '\n';
    for (const ResultRow& r : rows) os << csv_line(r) << '\n';
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open CSV file '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("'" + path + "' is empty");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
    }
    if (line != csv_header()) {
        throw std::runtime_error("'" + path + "' has an unexpected CSV schema");
    }
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 21) {
            throw std::runtime_error("'" + path + "' row " +
                                     std::to_string(rows.size() + 1) +
                                     " has the wrong number of fields");
        }
        ResultRow r;
        r.encoding = f[0];
        r.lattice_side = std::stoull(f[1]);
        r.circuit = f[2];
        r.depth = std::stod(f[3]);
        r.readout = f[4];
        r.mitigation = f[5];
        r.model = f[6];
        r.p = std::stod(f[7]);
        r.shots = std::stoull(f[8]);
        r.seed = std::stoull(f[9]);
        r.metrics.n_samp = std::stoull(f[10]);
        r.metrics.n_discard = std::stoull(f[11]);
        r.metrics.r_det = std::stod(f[12]);
        r.metrics.n_post = std::stoull(f[13]);
        r.metrics.r_obs_any = std::stod(f[14]);
        r.metrics.r_obs_worst = std::stod(f[15]);
        r.metrics.ci_low = std::stod(f[16]);
        r.metrics.ci_high = std::stod(f[17]);
        r.metrics.excluded = f[18] == "1" || f[18] == "true";
        if (!f[19].empty()) r.metrics.vqed_est = std::stod(f[19]);
        if (!f[20].empty()) r.metrics.vqed_var = std::stod(f[20]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

constexpr double kPlotLeft = 70.0;
constexpr double kPlotRight = 540.0;
constexpr double kPlotTop = 40.0;
constexpr double kPlotBottom = 430.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

double metric_value(const ResultRow& r, const std::string& key) {
    if (key == "r_det") return r.metrics.r_det;
    if (key == "r_obs_any") return r.metrics.r_obs_any;
    if (key == "r_obs_worst") return r.metrics.r_obs_worst;
    throw std::invalid_argument("unknown plot metric '" + key +
                                "' (expected r_obs_worst, r_obs_any or r_det)");
}

}  // namespace

void write_sweep_svg(const std::string& path, const std::vector<ResultRow>& rows,
                     const std::string& y_metric) {
    bool with_bars = y_metric == "r_obs_worst";

    // Group the non-excluded rows by curve label.
    std::map<std::string, std::vector<PlotPoint>> curves;
    for (const ResultRow& r : rows) {
        if (r.metrics.excluded) continue;
        PlotPoint pt;
        pt.x = r.depth;
        pt.y = metric_value(r, y_metric);
        pt.lo = with_bars ? r.metrics.ci_low : pt.y;
        pt.hi = with_bars ? r.metrics.ci_high : pt.y;
        curves[r.encoding + "+" + r.mitigation].push_back(pt);
    }
    for (auto& [label, pts] : curves) {
        std::sort(pts.begin(), pts.end(),
                  [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
    }

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    bool log_ok = true;
    for (const auto& [label, pts] : curves) {
        for (const PlotPoint& p : pts) {
            if (first) {
                x_min = x_max = p.x;
                y_min = p.lo;
                y_max = p.hi;
                first = false;
            } else {
                x_min = std::min(x_min, p.x);
                x_max = std::max(x_max, p.x);
                y_min = std::min(y_min, p.lo);
                y_max = std::max(y_max, p.hi);
            }
            if (p.y <= 0.0) log_ok = false;
        }
    }
    if (x_min == x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    bool log_y = log_ok && !first && y_max > 0.0;
    if (log_y) {
        // Clamp zero bar ends one decade below the smallest positive value.
        double pos_min = y_max;
        for (const auto& [label, pts] : curves) {
            for (const PlotPoint& p : pts) {
                if (p.lo > 0.0) pos_min = std::min(pos_min, p.lo);
                pos_min = std::min(pos_min, p.y);
            }
        }
        y_min = pos_min / 2.0;
        y_max = y_max * 1.5;
    } else {
        double pad = (y_max - y_min) * 0.08;
        if (pad == 0.0) pad = 0.5;
        y_min -= pad;
        y_max += pad;
        if (y_min < 0.0) y_min = 0.0;
        if (y_max <= y_min) y_max = y_min + 1.0;
    }

    auto sx = [&](double x) {
        return kPlotLeft + (x - x_min) / (x_max - x_min) * (kPlotRight - kPlotLeft);
    };
    auto sy = [&](double y) {
        double t;
        if (log_y) {
            double yy = std::max(y, y_min);
            t = (std::log10(yy) - std::log10(y_min)) /
                (std::log10(y_max) - std::log10(y_min));
        } else {
            t = (y - y_min) / (y_max - y_min);
        }
        return kPlotBottom - t * (kPlotBottom - kPlotTop);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n"
        << "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";

    // Axes.
    svg << "<line x1=\"" << num(kPlotLeft) << "\" y1=\"" << num(kPlotBottom)
        << "\" x2=\"" << num(kPlotRight) << "\" y2=\"" << num(kPlotBottom)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << num(kPlotLeft) << "\" y1=\"" << num(kPlotTop)
        << "\" x2=\"" << num(kPlotLeft) << "\" y2=\"" << num(kPlotBottom)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = x_min + (x_max - x_min) * i / 4.0;
        double px = sx(fx);
        svg << "<line x1=\"" << num(px) << "\" y1=\"" << num(kPlotBottom)
            << "\" x2=\"" << num(px) << "\" y2=\"" << num(kPlotBottom + 5)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(px) << "\" y=\"" << num(kPlotBottom + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << num(fx)
            << "</text>\n";
        double fy;
        if (log_y) {
            double lt = std::log10(y_min) +
                        (std::log10(y_max) - std::log10(y_min)) * i / 4.0;
            fy = std::pow(10.0, lt);
        } else {
            fy = y_min + (y_max - y_min) * i / 4.0;
        }
        double py = sy(fy);
        svg << "<line x1=\"" << num(kPlotLeft - 5) << "\" y1=\"" << num(py)
            << "\" x2=\"" << num(kPlotLeft) << "\" y2=\"" << num(py)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(kPlotLeft - 8) << "\" y=\"" << num(py + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    svg << "<text x=\"" << num((kPlotLeft + kPlotRight) / 2) << "\" y=\"470\" "
           "font-size=\"13\" text-anchor=\"middle\">depth</text>\n";
    svg << "<text x=\"18\" y=\"" << num((kPlotTop + kPlotBottom) / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num((kPlotTop + kPlotBottom) / 2) << ")\">" << y_metric << "</text>\n";

    if (curves.empty()) {
        svg << "<text x=\"" << num((kPlotLeft + kPlotRight) / 2) << "\" y=\""
            << num((kPlotTop + kPlotBottom) / 2)
            << "\" font-size=\"14\" text-anchor=\"middle\">no unexcluded data"
               "</text>\n";
    }

    std::size_t ci = 0;
    double legend_y = kPlotTop + 10;
    for (const auto& [label, pts] : curves) {
        const char* color = kPalette[ci % (sizeof kPalette / sizeof kPalette[0])];
        ++ci;
        std::ostringstream poly;
        for (const PlotPoint& p : pts) {
            poly << num(sx(p.x)) << ',' << num(sy(p.y)) << ' ';
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"" << poly.str() << "\"/>\n";
        for (const PlotPoint& p : pts) {
            double px = sx(p.x);
            svg << "<circle cx=\"" << num(px) << "\" cy=\"" << num(sy(p.y))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            if (with_bars && p.hi > p.lo) {
                double ylo = sy(p.lo), yhi = sy(p.hi);
                svg << "<line x1=\"" << num(px) << "\" y1=\"" << num(ylo)
                    << "\" x2=\"" << num(px) << "\" y2=\"" << num(yhi)
                    << "\" stroke=\"" << color << "\"/>\n"
                    << "<line x1=\"" << num(px - 3) << "\" y1=\"" << num(ylo)
                    << "\" x2=\"" << num(px + 3) << "\" y2=\"" << num(ylo)
                    << "\" stroke=\"" << color << "\"/>\n"
                    << "<line x1=\"" << num(px - 3) << "\" y1=\"" << num(yhi)
                    << "\" x2=\"" << num(px + 3) << "\" y2=\"" << num(yhi)
                    << "\" stroke=\"" << color << "\"/>\n";
            }
        }
        svg << "<line x1=\"560\" y1=\"" << num(legend_y - 4) << "\" x2=\"584\" y2=\""
            << num(legend_y - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"590\" y=\"" << num(legend_y)
            << "\" font-size=\"12\">" << label << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << svg.str();
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fermistab
