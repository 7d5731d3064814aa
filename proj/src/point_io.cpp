// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/point_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pvlab/error.hpp"

namespace pvlab
{
std::string format_double(double value)
{
    if (std::isnan(value))
    {
        return "nan";
    }
    if (std::isinf(value))
    {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_points_csv(std::ostream& os, PointConfiguration const& config)
{
    for (std::size_t a = 0; a < config.dim(); ++a)
    {
        os << (a ? ",x" : "x") << a + 1;
    }
    os << '\n';
    for (std::size_t i = 0; i < config.size(); ++i)
    {
        for (std::size_t a = 0; a < config.dim(); ++a)
        {
            os << (a ? "," : "") << format_double(config.coord(i, a));
        }
        os << '\n';
    }
}

PointConfiguration read_points_csv(std::istream& is)
{
    std::string line;
    require(static_cast<bool>(std::getline(is, line)),
            "point CSV: missing header", ErrorCode::io);
    if (!line.empty() && line.back() == '\r')
    {
        line.pop_back();
    }
    std::size_t dim = 0;
    {
        std::istringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ','))
        {
            ++dim;
            require(cell == "x" + std::to_string(dim),
                    "point CSV: header must be x1,...,xd, got '" + line + "'",
                    ErrorCode::io);
        }
    }
    require(dim >= 1, "point CSV: empty header", ErrorCode::io);

    PointConfiguration config(dim);
    Point x(dim);
    std::size_t row = 1;
    while (std::getline(is, line))
    {
        ++row;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        std::istringstream cells(line);
        std::string cell;
        std::size_t a = 0;
        while (std::getline(cells, cell, ','))
        {
            require(a < dim,
                    "point CSV row " + std::to_string(row) + ": too many columns",
                    ErrorCode::io);
            try
            {
                std::size_t used = 0;
                x[a] = std::stod(cell, &used);
                require(used == cell.size(), "trailing characters");
            }
            catch (std::exception const&)
            {
                fail(ErrorCode::io, "point CSV row " + std::to_string(row)
                                        + ": bad number '" + cell + "'");
            }
            ++a;
        }
        require(a == dim,
                "point CSV row " + std::to_string(row) + ": expected "
                    + std::to_string(dim) + " columns",
                ErrorCode::io);
        config.push_back(x);
    }
    return config;
}

void save_points_csv(std::string const& path, PointConfiguration const& config)
{
    std::ofstream os(path, std::ios::binary);
    require(os.good(), "cannot open '" + path + "' for writing", ErrorCode::io);
    write_points_csv(os, config);
    require(os.good(), "write to '" + path + "' failed", ErrorCode::io);
}

PointConfiguration load_points_csv(std::string const& path)
{
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "cannot open '" + path + "'", ErrorCode::io);
    return read_points_csv(is);
}
}  // namespace pvlab
