// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/pvlab.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "pvlab/error.hpp"
#include "pvlab/experiment.hpp"
#include "pvlab/malliavin.hpp"
#include "pvlab/parallel.hpp"
#include "pvlab/point_io.hpp"
#include "pvlab/poisson.hpp"
#include "pvlab/polytope.hpp"
#include "pvlab/registry.hpp"

struct pvlab_points
{
    pvlab::PointConfiguration config;
};

struct pvlab_window
{
    pvlab::Window window;
};

struct pvlab_model
{
    pvlab::Functional functional;
    pvlab_window window;
    double intensity;
    std::string label;
};

struct pvlab_hull
{
    pvlab::HullPolytope hull;
};

namespace
{
thread_local std::string g_last_error;

pvlab_status status_of(pvlab::ErrorCode code)
{
    switch (code)
    {
    case pvlab::ErrorCode::invalid_argument:
        return PVLAB_ERROR_INVALID_ARGUMENT;
    case pvlab::ErrorCode::dimension_mismatch:
        return PVLAB_ERROR_DIMENSION_MISMATCH;
    case pvlab::ErrorCode::degenerate:
        return PVLAB_ERROR_DEGENERATE;
    case pvlab::ErrorCode::numeric:
        return PVLAB_ERROR_NUMERIC;
    case pvlab::ErrorCode::config:
        return PVLAB_ERROR_CONFIG;
    case pvlab::ErrorCode::io:
        return PVLAB_ERROR_IO;
    case pvlab::ErrorCode::not_found:
        return PVLAB_ERROR_NOT_FOUND;
    }
    return PVLAB_ERROR_INTERNAL;
}

template<class F>
pvlab_status guarded(F&& body) noexcept
{
    try
    {
        body();
        g_last_error.clear();
        return PVLAB_OK;
    }
    catch (pvlab::Error const& e)
    {
        g_last_error = e.what();
        return status_of(e.code());
    }
    catch (std::bad_alloc const&)
    {
        g_last_error = "out of memory";
        return PVLAB_ERROR_INTERNAL;
    }
    catch (std::exception const& e)
    {
        g_last_error = e.what();
        return PVLAB_ERROR_INTERNAL;
    }
    catch (...)
    {
        g_last_error = "unknown error";
        return PVLAB_ERROR_INTERNAL;
    }
}

template<class T>
void require_ptr(T const* p, char const* what)
{
    pvlab::require(p != nullptr, std::string(what) + " must not be NULL");
}

void check_dim(std::size_t expected, std::size_t given)
{
    if (expected != given)
    {
        pvlab::fail(pvlab::ErrorCode::dimension_mismatch,
                    "expected dimension " + std::to_string(expected) + ", got "
                        + std::to_string(given));
    }
}

pvlab::SeedSpec to_seed(pvlab_seed s)
{
    return pvlab::SeedSpec{s.master_seed, {s.experiment, s.replication}};
}

pvlab_estimate to_c(pvlab::EstimateWithCI const& e)
{
    return pvlab_estimate{e.estimate, e.std_error,
                          static_cast<uint64_t>(e.n_reps), e.ci_level,
                          e.ci_lo, e.ci_hi};
}

void copy_out(std::string const& text, char* buffer, size_t capacity,
              size_t* required)
{
    require_ptr(required, "required");
    *required = text.size() + 1;
    if (buffer != nullptr && capacity > 0)
    {
        std::size_t const n = std::min(capacity - 1, text.size());
        std::memcpy(buffer, text.data(), n);
        buffer[n] = '\0';
    }
}

pvlab::LogSink sink(pvlab_log_fn log, void* user)
{
    if (log == nullptr)
    {
        return {};
    }
    return [log, user](std::string const& line) { log(line.c_str(), user); };
}
}  // namespace

extern "C" {

const char* pvlab_version(void)
{
    return "0.1.0";
}

const char* pvlab_last_error(void)
{
    return g_last_error.c_str();
}

const char* pvlab_status_string(pvlab_status status)
{
    switch (status)
    {
    case PVLAB_OK:
        return "ok";
    case PVLAB_ERROR_INVALID_ARGUMENT:
        return "invalid argument";
    case PVLAB_ERROR_DIMENSION_MISMATCH:
        return "dimension mismatch";
    case PVLAB_ERROR_DEGENERATE:
        return "degenerate input";
    case PVLAB_ERROR_NUMERIC:
        return "numeric failure";
    case PVLAB_ERROR_CONFIG:
        return "configuration error";
    case PVLAB_ERROR_IO:
        return "i/o error";
    case PVLAB_ERROR_NOT_FOUND:
        return "not found";
    case PVLAB_ERROR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void pvlab_set_thread_count(size_t n)
{
    pvlab::set_thread_count(n);
}

pvlab_status pvlab_points_create(size_t dim, pvlab_points** out)
{
    return guarded([&] {
        require_ptr(out, "out");
        pvlab::require(dim >= 1, "dimension must be >= 1");
        *out = new pvlab_points{pvlab::PointConfiguration(dim)};
    });
}

void pvlab_points_destroy(pvlab_points* points)
{
    delete points;
}

size_t pvlab_points_dim(const pvlab_points* points)
{
    return points == nullptr ? 0 : points->config.dim();
}

size_t pvlab_points_size(const pvlab_points* points)
{
    return points == nullptr ? 0 : points->config.size();
}

pvlab_status pvlab_points_append(pvlab_points* points, const double* x,
                                 size_t dim)
{
    return guarded([&] {
        require_ptr(points, "points");
        require_ptr(x, "x");
        check_dim(points->config.dim(), dim);
        points->config.push_back(pvlab::Point(x, x + dim));
    });
}

pvlab_status pvlab_points_get(const pvlab_points* points, size_t index,
                              double* out, size_t dim)
{
    return guarded([&] {
        require_ptr(points, "points");
        require_ptr(out, "out");
        check_dim(points->config.dim(), dim);
        pvlab::require(index < points->config.size(), "index out of range");
        auto const p = points->config.point(index);
        std::copy(p.begin(), p.end(), out);
    });
}

pvlab_status pvlab_points_read_csv(const char* path, pvlab_points** out)
{
    return guarded([&] {
        require_ptr(path, "path");
        require_ptr(out, "out");
        *out = new pvlab_points{pvlab::load_points_csv(path)};
    });
}

pvlab_status pvlab_points_write_csv(const pvlab_points* points,
                                    const char* path)
{
    return guarded([&] {
        require_ptr(points, "points");
        require_ptr(path, "path");
        pvlab::save_points_csv(path, points->config);
    });
}

pvlab_status pvlab_window_create_box(size_t dim, const double* lo,
                                     const double* hi, pvlab_window** out)
{
    return guarded([&] {
        require_ptr(lo, "lo");
        require_ptr(hi, "hi");
        require_ptr(out, "out");
        *out = new pvlab_window{pvlab::Window::box(pvlab::Point(lo, lo + dim),
                                                   pvlab::Point(hi, hi + dim))};
    });
}

pvlab_status pvlab_window_create_ball(size_t dim, const double* center,
                                      double radius, pvlab_window** out)
{
    return guarded([&] {
        require_ptr(center, "center");
        require_ptr(out, "out");
        *out = new pvlab_window{
            pvlab::Window::ball(pvlab::Point(center, center + dim), radius)};
    });
}

void pvlab_window_destroy(pvlab_window* window)
{
    delete window;
}

double pvlab_window_volume(const pvlab_window* window)
{
    return window == nullptr ? std::numeric_limits<double>::quiet_NaN()
                             : window->window.volume();
}

int pvlab_window_contains(const pvlab_window* window, const double* x,
                          size_t dim)
{
    if (window == nullptr || x == nullptr || dim != window->window.dim())
    {
        return 0;
    }
    return window->window.contains(std::span<double const>(x, dim)) ? 1 : 0;
}

pvlab_status pvlab_ball_volume(size_t dim, double radius, double* out)
{
    return guarded([&] {
        require_ptr(out, "out");
        *out = pvlab::ball_volume(dim, radius);
    });
}

pvlab_status pvlab_sample_poisson(const pvlab_window* window, double intensity,
                                  pvlab_seed seed, pvlab_points** out)
{
    return guarded([&] {
        require_ptr(window, "window");
        require_ptr(out, "out");
        *out = new pvlab_points{
            pvlab::sample_poisson(window->window, intensity, to_seed(seed))};
    });
}

pvlab_status pvlab_model_create(const char* name, const char* params_json,
                                double s, pvlab_model** out)
{
    return guarded([&] {
        require_ptr(name, "name");
        require_ptr(out, "out");
        nlohmann::json params = nlohmann::json::object();
        if (params_json != nullptr && *params_json != '\0')
        {
            try
            {
                params = nlohmann::json::parse(params_json);
            }
            catch (nlohmann::json::parse_error const& e)
            {
                pvlab::fail(pvlab::ErrorCode::config,
                            std::string("params_json: ") + e.what());
            }
        }
        pvlab::PoissonModel m
            = pvlab::FunctionalRegistry::builtin().make(name, params, s);
        std::string label = m.functional.label();
        *out = new pvlab_model{std::move(m.functional),
                               pvlab_window{std::move(m.window)}, m.intensity,
                               std::move(label)};
    });
}

void pvlab_model_destroy(pvlab_model* model)
{
    delete model;
}

const char* pvlab_model_label(const pvlab_model* model)
{
    return model == nullptr ? "" : model->label.c_str();
}

double pvlab_model_intensity(const pvlab_model* model)
{
    return model == nullptr ? std::numeric_limits<double>::quiet_NaN()
                            : model->intensity;
}

const pvlab_window* pvlab_model_window(const pvlab_model* model)
{
    return model == nullptr ? nullptr : &model->window;
}

pvlab_status pvlab_model_evaluate(const pvlab_model* model,
                                  const pvlab_points* points, double* out)
{
    return guarded([&] {
        require_ptr(model, "model");
        require_ptr(points, "points");
        require_ptr(out, "out");
        check_dim(model->window.window.dim(), points->config.dim());
        *out = model->functional(points->config);
    });
}

pvlab_status pvlab_model_difference(const pvlab_model* model,
                                    const pvlab_points* points, const double* x,
                                    size_t dim, double* out)
{
    return guarded([&] {
        require_ptr(model, "model");
        require_ptr(points, "points");
        require_ptr(x, "x");
        require_ptr(out, "out");
        check_dim(points->config.dim(), dim);
        *out = pvlab::difference(model->functional, points->config,
                                 std::span<double const>(x, dim));
    });
}

pvlab_status pvlab_model_second_difference(const pvlab_model* model,
                                           const pvlab_points* points,
                                           const double* x, const double* y,
                                           size_t dim, double* out)
{
    return guarded([&] {
        require_ptr(model, "model");
        require_ptr(points, "points");
        require_ptr(x, "x");
        require_ptr(y, "y");
        require_ptr(out, "out");
        check_dim(points->config.dim(), dim);
        *out = pvlab::second_difference(model->functional, points->config,
                                        std::span<double const>(x, dim),
                                        std::span<double const>(y, dim));
    });
}

pvlab_status pvlab_estimate_variance(const pvlab_model* model, uint64_t n_reps,
                                     pvlab_seed seed, pvlab_estimate* out)
{
    return guarded([&] {
        require_ptr(model, "model");
        require_ptr(out, "out");
        *out = to_c(pvlab::estimate_variance(model->functional,
                                             model->window.window,
                                             model->intensity, n_reps,
                                             to_seed(seed)));
    });
}

pvlab_status pvlab_estimate_dirichlet(const pvlab_model* model,
                                      uint64_t n_reps, pvlab_seed seed,
                                      pvlab_dirichlet* out)
{
    return guarded([&] {
        require_ptr(model, "model");
        require_ptr(out, "out");
        pvlab::DirichletEstimate const de = pvlab::estimate_dirichlet(
            model->functional, model->window.window, model->intensity, n_reps,
            to_seed(seed));
        out->first_order = to_c(de.first_order);
        out->second_order = to_c(de.second_order);
        out->alpha_hat = de.alpha_hat;
        out->lower_bound = pvlab::theorem1_lower_bound(de);
        out->lower_bound_std_error = pvlab::theorem1_lower_bound_std_error(de);
        out->upper_bound = pvlab::poincare_upper_bound(de);
    });
}

pvlab_status pvlab_first_chaos_bound(const pvlab_model* model, uint64_t n_reps,
                                     uint64_t inner_count, pvlab_seed seed,
                                     pvlab_estimate* out)
{
    return guarded([&] {
        require_ptr(model, "model");
        require_ptr(out, "out");
        *out = to_c(pvlab::first_chaos_bound(
            model->functional, model->window.window, model->intensity, n_reps,
            to_seed(seed), inner_count));
    });
}

pvlab_status pvlab_hull_compute(const pvlab_points* points, pvlab_hull** out)
{
    return guarded([&] {
        require_ptr(points, "points");
        require_ptr(out, "out");
        *out = new pvlab_hull{pvlab::convex_hull(points->config)};
    });
}

void pvlab_hull_destroy(pvlab_hull* hull)
{
    delete hull;
}

size_t pvlab_hull_facet_count(const pvlab_hull* hull)
{
    return hull == nullptr ? 0 : hull->hull.facets.size();
}

size_t pvlab_hull_vertex_count(const pvlab_hull* hull)
{
    return hull == nullptr ? 0 : hull->hull.vertices.size();
}

pvlab_status pvlab_hull_lp_area(const pvlab_hull* hull, double p, double* out)
{
    return guarded([&] {
        require_ptr(hull, "hull");
        require_ptr(out, "out");
        *out = pvlab::lp_surface_area(hull->hull, p);
    });
}

pvlab_status pvlab_hull_to_json(const pvlab_hull* hull, char* buffer,
                                size_t capacity, size_t* required)
{
    return guarded([&] {
        require_ptr(hull, "hull");
        copy_out(pvlab::hull_to_json(hull->hull).dump(), buffer, capacity,
                 required);
    });
}

pvlab_status pvlab_list_functionals(char* buffer, size_t capacity,
                                    size_t* required)
{
    return guarded([&] {
        copy_out(pvlab::format_catalogue(pvlab::FunctionalRegistry::builtin()),
                 buffer, capacity, required);
    });
}

pvlab_status pvlab_run_experiment(const char* config_path, int override_seed,
                                  uint64_t seed, pvlab_log_fn log, void* user,
                                  int* exit_code)
{
    return guarded([&] {
        require_ptr(config_path, "config_path");
        require_ptr(exit_code, "exit_code");
        std::optional<std::uint64_t> over;
        if (override_seed != 0)
        {
            over = seed;
        }
        *exit_code = pvlab::run_experiment_file(config_path, over, sink(log, user));
    });
}

pvlab_status pvlab_selftest(pvlab_log_fn log, void* user, int* exit_code)
{
    return guarded([&] {
        require_ptr(exit_code, "exit_code");
        *exit_code = pvlab::run_selftest(sink(log, user));
    });
}

}  // extern "C"
