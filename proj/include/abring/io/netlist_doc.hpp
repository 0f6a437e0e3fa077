#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "abring/sweep.hpp"

namespace abring::io {

// Line-oriented netlist text. Ports are 0-based; `#` starts a comment.
//
//   coax semi inner=0.091cm outer=0.298cm eps_r=2.01 tan_delta=0.00028 rho=4.4e-7ohm*m
//   component L1 line coax=semi length=0.2116m lossless=true
//   component L2 line coax=semi electrical_length=0.3m
//   component T1 tee ports=3
//   component C1 circulator chirality=forward
//   component A1 attenuator loss=0.18Np
//   component O1 termination kind=open|short|matched
//   component G1 gyrator coax=semi electrical_length=0.3m phase=180deg
//   connect T1.1 -- L1.0
//   external T1.0
//   sweep start=7GHz stop=12.4GHz points=5501
struct NetlistDoc {
    Netlist netlist;
    std::map<std::string, CoaxSpec> coax;
    std::optional<FrequencyGrid> sweep;
};

// Syntax and unit errors throw ConfigError with `source:line:` context.
// Topology is not validated here.
NetlistDoc parse_netlist_doc(std::istream& in, const std::string& source = "<input>");
NetlistDoc read_netlist_doc(const std::filesystem::path& path);

std::string write_netlist_doc(const Netlist& netlist, const std::optional<FrequencyGrid>& sweep = {});

} // namespace abring::io
