#include "gq/gq.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "gq/asymptotics.hpp"
#include "gq/errors.hpp"
#include "gq/gersho.hpp"
#include "gq/io.hpp"
#include "gq/lloyd.hpp"

struct gq_model {
    gq::DensityModel model;
};

struct gq_config {
    gq::SolverConfig cfg;
};

struct gq_quantizer {
    gq::Quantizer q;
};

struct gq_report {
    gq::ConstructionReport report;
};

struct gq_table {
    gq::ConvergenceTable table;
    gq::Order order;
};

namespace {

thread_local std::string last_error;

gq_status status_of(gq::ErrorCode code) {
    using gq::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidInterval: return GQ_ERR_INVALID_INTERVAL;
    case ErrorCode::QuadratureFailure: return GQ_ERR_QUADRATURE;
    case ErrorCode::EmptyCell: return GQ_ERR_EMPTY_CELL;
    case ErrorCode::TargetTooLarge: return GQ_ERR_TARGET_TOO_LARGE;
    case ErrorCode::InvalidTarget: return GQ_ERR_INVALID_TARGET;
    case ErrorCode::ConstructionFailure: return GQ_ERR_CONSTRUCTION;
    case ErrorCode::DegenerateCell: return GQ_ERR_DEGENERATE_CELL;
    case ErrorCode::InfiniteZadorConstant: return GQ_ERR_INFINITE_ZADOR;
    case ErrorCode::InvalidParameter: return GQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::ParseError: return GQ_ERR_PARSE;
    case ErrorCode::IoError: return GQ_ERR_IO;
    }
    return GQ_ERR_INTERNAL;
}

template <class F>
gq_status guarded(F&& f) {
    try {
        last_error.clear();
        f();
        return GQ_OK;
    } catch (const gq::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return GQ_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return GQ_ERR_INTERNAL;
    }
}

gq_status null_argument(const char* what) {
    last_error = std::string("null argument: ") + what;
    return GQ_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

size_t copy_values(const std::vector<double>& values, double* buf, size_t capacity) {
    if (buf) {
        const size_t count = values.size() < capacity ? values.size() : capacity;
        std::memcpy(buf, values.data(), count * sizeof(double));
    }
    return values.size();
}

const gq::SolverConfig& config_of(const gq_config* cfg) {
    static const gq::SolverConfig defaults{};
    return cfg ? cfg->cfg : defaults;
}

} // namespace

extern "C" {

const char* gq_version(void) { return GQ_VERSION; }

const char* gq_status_string(gq_status status) {
    switch (status) {
    case GQ_OK: return "ok";
    case GQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GQ_ERR_INVALID_INTERVAL: return "invalid interval";
    case GQ_ERR_QUADRATURE: return "quadrature failure";
    case GQ_ERR_EMPTY_CELL: return "empty cell";
    case GQ_ERR_TARGET_TOO_LARGE: return "target too large";
    case GQ_ERR_INVALID_TARGET: return "invalid target";
    case GQ_ERR_CONSTRUCTION: return "construction failure";
    case GQ_ERR_DEGENERATE_CELL: return "degenerate cell";
    case GQ_ERR_INFINITE_ZADOR: return "infinite Zador constant";
    case GQ_ERR_PARSE: return "parse error";
    case GQ_ERR_IO: return "i/o error";
    case GQ_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* gq_last_error(void) { return last_error.c_str(); }

void gq_string_free(char* s) { std::free(s); }

gq_status gq_model_parse(const char* spec, gq_model** out) {
    if (!spec) return null_argument("spec");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new gq_model{gq::parse_model_spec(spec)}; });
}

void gq_model_free(gq_model* model) { delete model; }

gq_status gq_model_pdf(const gq_model* model, double x, double* out) {
    if (!model || !out) return null_argument("model/out");
    return guarded([&] { *out = model->model.pdf(x); });
}

gq_status gq_model_mass(const gq_model* model, double a, double b, double* out) {
    if (!model || !out) return null_argument("model/out");
    return guarded([&] { *out = model->model.mass(a, b); });
}

gq_status gq_model_support(const gq_model* model, double* lo, double* hi) {
    if (!model || !lo || !hi) return null_argument("model/lo/hi");
    *lo = model->model.support_lo();
    *hi = model->model.support_hi();
    return GQ_OK;
}

int gq_model_interval_support(const gq_model* model) { return model && model->model.interval_support() ? 1 : 0; }

gq_status gq_config_new(gq_config** out) {
    if (!out) return null_argument("out");
    return guarded([&] { *out = new gq_config{}; });
}

void gq_config_free(gq_config* cfg) { delete cfg; }

gq_status gq_config_set(gq_config* cfg, const char* key, double value) {
    if (!cfg || !key) return null_argument("cfg/key");
    return guarded([&] { cfg->cfg.set(key, value); });
}

gq_status gq_config_load_file(gq_config* cfg, const char* path) {
    if (!cfg || !path) return null_argument("cfg/path");
    return guarded([&] { gq::io::load_config_file(path, cfg->cfg); });
}

gq_status gq_build(const gq_model* model, int n, double r, gq_method method, const gq_config* cfg,
                   gq_quantizer** quantizer, gq_report** report) {
    if (!model || !quantizer) return null_argument("model/quantizer");
    return guarded([&] {
        const gq::Order order(r);
        const auto& c = config_of(cfg);
        std::optional<gq::BuildResult> built;
        switch (method) {
        case GQ_METHOD_GERSHO:
            built.emplace(gq::build_gersho(model->model, n, order, c));
            break;
        case GQ_METHOD_DOUBLING: {
            if (n < 1 || (n & (n - 1)) != 0) {
                throw gq::Error(gq::ErrorCode::InvalidParameter, "doubling needs n to be a power of two");
            }
            int k = 0;
            while ((1 << k) < n) ++k;
            built.emplace(gq::build_by_doubling(model->model, k, order, c));
            break;
        }
        case GQ_METHOD_LLOYD: {
            auto res = gq::run_lloyd(model->model, n, order, gq::LloydInit::quantile_grid(), c);
            gq::ConstructionReport rep;
            rep.distortion = res.quantizer.distortion();
            rep.per_cell_spread = gq::per_cell_spread(res.quantizer.cell_moments);
            rep.outer_iterations = res.iterations;
            rep.method = gq::Method::Lloyd;
            rep.unique = false;
            built.emplace(gq::BuildResult{std::move(res.quantizer), std::move(rep)});
            break;
        }
        default:
            throw gq::Error(gq::ErrorCode::InvalidParameter, "unknown construction method");
        }
        auto q = std::make_unique<gq_quantizer>(gq_quantizer{std::move(built->quantizer)});
        if (report) *report = new gq_report{std::move(built->report)};
        *quantizer = q.release();
    });
}

gq_status gq_counterexample(int n, double eps, double r, gq_quantizer** out) {
    if (!out) return null_argument("out");
    return guarded([&] { *out = new gq_quantizer{gq::counterexample_quantizer(n, eps, gq::Order(r))}; });
}

void gq_quantizer_free(gq_quantizer* q) { delete q; }

int gq_quantizer_level(const gq_quantizer* q) { return q ? static_cast<int>(q->q.level()) : 0; }

double gq_quantizer_order(const gq_quantizer* q) { return q ? q->q.order.value() : 0.0; }

double gq_quantizer_distortion(const gq_quantizer* q) { return q ? q->q.distortion() : 0.0; }

size_t gq_quantizer_boundaries(const gq_quantizer* q, double* buf, size_t capacity) {
    return q ? copy_values(q->q.boundaries, buf, capacity) : 0;
}

size_t gq_quantizer_codepoints(const gq_quantizer* q, double* buf, size_t capacity) {
    return q ? copy_values(q->q.codepoints, buf, capacity) : 0;
}

size_t gq_quantizer_cell_moments(const gq_quantizer* q, double* buf, size_t capacity) {
    return q ? copy_values(q->q.cell_moments, buf, capacity) : 0;
}

gq_status gq_quantizer_to_json(const gq_quantizer* q, char** out) {
    if (!q || !out) return null_argument("q/out");
    return guarded([&] { *out = copy_string(gq::io::quantizer_to_json(q->q)); });
}

gq_status gq_quantizer_from_json(const char* json, const gq_model* model, gq_quantizer** out) {
    if (!json || !out) return null_argument("json/out");
    return guarded([&] {
        *out = new gq_quantizer{gq::io::quantizer_from_json(json, model ? &model->model : nullptr)};
    });
}

void gq_report_free(gq_report* report) { delete report; }

double gq_report_spread(const gq_report* report) { return report ? report->report.per_cell_spread : 0.0; }

gq_status gq_report_to_json(const gq_report* report, char** out) {
    if (!report || !out) return null_argument("report/out");
    return guarded([&] { *out = copy_string(gq::io::report_to_json(report->report)); });
}

gq_status gq_verify(const gq_model* model, const gq_quantizer* q, double tol, const gq_config* cfg,
                    gq_verification* out, double* moments_buf, size_t capacity) {
    if (!model || !q || !out) return null_argument("model/q/out");
    return guarded([&] {
        if (!(tol > 0.0)) throw gq::Error(gq::ErrorCode::InvalidParameter, "tolerance must be positive");
        const auto v = gq::verify_quantizer(model->model, q->q, q->q.order, tol, config_of(cfg));
        out->g1 = v.g1;
        out->g2 = v.g2;
        out->g3 = v.g3;
        out->g4 = v.g4;
        out->voronoi = v.voronoi;
        out->distortion = v.distortion;
        out->per_cell_spread = v.per_cell_spread;
        out->max_center_offset = v.max_center_offset;
        copy_values(v.cell_moments, moments_buf, capacity);
        last_error = v.note;
    });
}

gq_status gq_zador_constant(const gq_model* model, double r, const gq_config* cfg, double* out) {
    if (!model || !out) return null_argument("model/out");
    return guarded([&] { *out = gq::zador_constant(model->model, gq::Order(r), config_of(cfg)); });
}

gq_status gq_convergence(const gq_model* model, double r, const int* levels, size_t count, gq_method method,
                         const gq_config* cfg, int jobs, gq_table** out) {
    if (!model || !levels || !out) return null_argument("model/levels/out");
    return guarded([&] {
        if (method != GQ_METHOD_GERSHO && method != GQ_METHOD_LLOYD) {
            throw gq::Error(gq::ErrorCode::InvalidParameter, "convergence supports gersho and lloyd only");
        }
        const gq::Order order(r);
        gq::check_order(order, config_of(cfg));
        const std::vector<int> lv(levels, levels + count);
        const auto tm = method == GQ_METHOD_GERSHO ? gq::TableMethod::Gersho : gq::TableMethod::Lloyd;
        *out = new gq_table{gq::convergence_table(model->model, order, lv, tm, config_of(cfg), jobs), order};
    });
}

void gq_table_free(gq_table* table) { delete table; }

size_t gq_table_size(const gq_table* table) { return table ? table->table.rows.size() : 0; }

gq_status gq_table_row(const gq_table* table, size_t index, gq_convergence_row* out) {
    if (!table || !out) return null_argument("table/out");
    if (index >= table->table.rows.size()) {
        last_error = "row index out of range";
        return GQ_ERR_INVALID_ARGUMENT;
    }
    const auto& row = table->table.rows[index];
    *out = gq_convergence_row{row.n, row.distortion, row.scaled, row.ratio, row.rate, row.failed ? 1 : 0,
                              row.seconds};
    return GQ_OK;
}

int gq_table_zador(const gq_table* table, double* out) {
    if (!table || !table->table.zador) return 0;
    if (out) *out = *table->table.zador;
    return 1;
}

gq_status gq_table_csv(const gq_table* table, int with_rate, char** out) {
    if (!table || !out) return null_argument("table/out");
    return guarded([&] { *out = copy_string(gq::io::convergence_csv(table->table, with_rate != 0)); });
}

gq_status gq_table_diagnostics_csv(const gq_table* table, const gq_model* model, double lo, double hi,
                                   const gq_config* cfg, char** out) {
    if (!table || !model || !out) return null_argument("table/model/out");
    return guarded([&] {
        std::vector<gq::DiagnosticsRow> rows;
        const auto& t = table->table;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            if (!t.quantizers[i]) continue;
            rows.push_back(gq::diagnostics(model->model, *t.quantizers[i], table->order, gq::Interval{lo, hi},
                                           config_of(cfg), t.zador));
        }
        *out = copy_string(gq::io::diagnostics_csv(rows));
    });
}

} // extern "C"
