#include "slcurv/io.hpp"
#include "slcurv/shape.hpp"
#include "slcurv/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

using namespace slcurv;

namespace {

std::string graph_text(const GraphFn& f, const GraphHeader& h)
{
    std::ostringstream os;
    write_graph(os, f, h);
    return os.str();
}

int format_line(const std::string& text)
{
    std::istringstream is(text);
    try {
        read_graph(is);
    } catch (const FormatError& e) {
        return e.line();
    }
    return -1;
}

std::string replace_line(const std::string& text, int line, const std::string& with)
{
    std::istringstream is(text);
    std::ostringstream os;
    std::string l;
    for (int no = 1; std::getline(is, l); ++no) {
        os << (no == line ? with : l) << '\n';
    }
    return os.str();
}

}  // namespace

TEST_SUITE("io")
{
    TEST_CASE("graph files round trip exactly")
    {
        for (const char* dom : {"disk:1", "star:1:2=0.05,3=-0.01"}) {
            const Grid g(DomainSpec::parse(dom), 16, 32);
            auto f = GraphFn::sample(g, [](double s, double a) { return 0.1 * std::cos(s) * (2.0 + std::sin(a)); });
            for (int k = 0; k < g.nalpha(); ++k) {
                f.at(g.ns(), k) = 0.0;
            }
            const GraphHeader h{2, 2.0, 0.6};
            const auto text = graph_text(f, h);
            std::istringstream is(text);
            const auto back = read_graph(is);
            CHECK(back.f.values() == f.values());
            CHECK(back.header.theta == h.theta);
            CHECK(back.header.rhat == h.rhat);
            CHECK(back.f.grid().same_lattice(g));
            CHECK(graph_text(back.f, back.header) == text);
        }
    }

    TEST_CASE("layout of the written file")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto text = graph_text(GraphFn(g), GraphHeader{2, 1.5, 0.5});
        std::istringstream is(text);
        std::string l1, l2, l3;
        std::getline(is, l1);
        std::getline(is, l2);
        std::getline(is, l3);
        CHECK(l1 == "# slcurv-graph v1");
        CHECK(l2 == "n=2 theta=1.5 rhat=0.5 domain=disk rho=1 Ns=8 Nalpha=16");
        CHECK(l3 == "j,k,s,alpha,f");
        CHECK(std::count(text.begin(), text.end(), '\n') == 3 + 9 * 16);
    }

    TEST_CASE("malformed files report the offending line")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto text = graph_text(umbilic_cap(0.5, g), GraphHeader{2, 2.0, 0.5});
        CHECK(format_line(replace_line(text, 1, "# slcurv-graph v2")) == 1);
        CHECK(format_line("") == 1);
        CHECK(format_line(replace_line(text, 2, "n=2 theta=2")) == 2);
        CHECK(format_line(replace_line(text, 2, "n=2 theta=2 rhat=0.5 domain=disk rho=1 Ns=8 Nalpha=16 color=red")) == 2);
        CHECK(format_line(replace_line(text, 3, "j,k,f")) == 3);
        CHECK(format_line(replace_line(text, 10, "0,6,abc,0,0")) == 10);
        CHECK(format_line(replace_line(text, 10, "0,6,1")) == 10);
        CHECK(format_line(replace_line(text, 10, "0,9,0.1,0,0")) == 10);
        CHECK(format_line(replace_line(text, 10, "0,6,0.5,2.35,0.1")) == 10);
        CHECK(format_line(replace_line(text, 3 + 8 * 16 + 1, "8,0,1,0,0.25")) == 3 + 8 * 16 + 1);
        CHECK(format_line(text + "extra\n") == 4 + 9 * 16);
        CHECK(format_line(text.substr(0, text.size() / 2)) > 3);
        // a theta outside the admissible range is a domain problem on line 2
        CHECK(format_line(replace_line(text, 2, "n=2 theta=3.5 rhat=0.5 domain=disk rho=1 Ns=8 Nalpha=16")) == 2);
        CHECK(format_line(replace_line(text, 2, "n=2 theta=2 rhat=0.5 domain=disk rho=-1 Ns=8 Nalpha=16")) == 2);
        CHECK(format_line(replace_line(text, 2, "n=2 theta=2 rhat=0.5 domain=disk rho=1 Ns=8 Nalpha=15")) == 2);
        CHECK(format_line(replace_line(text, 2, "n=2 theta=2 rhat=0.5 domain=ring rho=1 Ns=8 Nalpha=16")) == 2);
    }

    TEST_CASE("missing files raise IoError")
    {
        CHECK_THROWS_AS(read_graph(std::filesystem::path("/nonexistent/graph.csv")), IoError);
        CHECK_THROWS_AS(write_text("/nonexistent/dir/out.txt", "x"), IoError);
    }

    TEST_CASE("curvature table")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        const auto q = CurvatureQuery::from_rhat(2, std::numbers::pi / 2.0, 0.5);
        std::ostringstream os;
        write_curvature(os, shape_field(GraphFn(g), q), g);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "j,k,lambda_min,lambda_max,H,rhat_theta,residual,admissible");
        std::getline(is, line);
        CHECK(line.substr(0, 4) == "0,0,");
        CHECK(line.find(",nan,") != std::string::npos);
        CHECK(line.substr(line.size() - 6) == ",false");
    }

    TEST_CASE("OBJ mesh")
    {
        const Grid g(DomainSpec::disk(1.0), 8, 16);
        std::ostringstream os;
        write_obj(os, umbilic_cap(0.5, g));
        const auto text = os.str();
        std::size_t v = 0;
        std::size_t f = 0;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            v += line.rfind("v ", 0) == 0;
            f += line.rfind("f ", 0) == 0;
        }
        CHECK(v == g.node_count() + 1);
        CHECK(f == static_cast<std::size_t>(16 + 2 * 8 * 16));
    }

    TEST_CASE("report JSON has a stable layout")
    {
        SolveConfig cfg;
        cfg.homotopy.steps = 2;
        const auto q = CurvatureQuery::from_rhat(2, 2.0, 0.3);
        const auto r = continuity_solve(DomainSpec::disk(1.0), 8, 16, q, cfg);
        const auto j = to_json(r.report, false);
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) {
            keys.push_back(k);
        }
        CHECK(keys == std::vector<std::string>{"levels", "converged", "grid", "n", "theta", "theta_solve"});
        CHECK(j["levels"].size() == 3);
        CHECK(j["levels"][0].contains("res"));
        CHECK(j["grid"]["Ns"] == 8);
        CHECK(to_json(r.report, true).contains("runtime_s"));
        CHECK(to_json(r.report, false).dump() == to_json(r.report, false).dump());
    }

    TEST_CASE("format_double keeps 17 digits")
    {
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(std::stod(format_double(std::numbers::pi)) == std::numbers::pi);
    }
}
