#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace spillover {

/// Directed spillover network built from an antisymmetric net-pairwise
/// matrix. An edge i -> j exists when npdc(j, i) exceeds the threshold and
/// carries that value as its weight; node roles come from the sign of NET.
struct NetworkGraph {
    struct Node {
        std::string name;
        double net = 0.0;
        bool transmitter = false;
    };
    struct Edge {
        int source = 0;
        int target = 0;
        double weight = 0.0;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    double threshold = 0.0;
};

NetworkGraph export_network(const Eigen::MatrixXd& npdc, const Eigen::VectorXd& net,
                            const std::vector<std::string>& assets, double threshold);

std::string to_dot(const NetworkGraph& graph, const std::string& comment = "");
std::string to_graphml(const NetworkGraph& graph, const std::string& comment = "");

}  // namespace spillover
