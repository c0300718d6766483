#include "spillover/network.hpp"

#include <cmath>
#include <sstream>

#include "spillover/errors.hpp"
#include "spillover/textio.hpp"

namespace spillover {

NetworkGraph export_network(const Eigen::MatrixXd& npdc, const Eigen::VectorXd& net,
                            const std::vector<std::string>& assets, double threshold) {
    const Eigen::Index k = npdc.rows();
    if (npdc.cols() != k || net.size() != k ||
        static_cast<Eigen::Index>(assets.size()) != k)
        throw data_error("export_network: mismatched dimensions");
    if (((npdc + npdc.transpose()).array().abs() > 1e-9).any())
        throw data_error("export_network: matrix is not antisymmetric");

    NetworkGraph graph;
    graph.threshold = threshold;
    for (Eigen::Index i = 0; i < k; ++i)
        graph.nodes.push_back({assets[static_cast<std::size_t>(i)], net(i), net(i) > 0.0});
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i == j) continue;
            const double w = npdc(j, i);
            if (w > threshold)
                graph.edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
        }
    return graph;
}

std::string to_dot(const NetworkGraph& graph, const std::string& comment) {
    std::ostringstream out;
    out << "digraph spillover {\n";
    if (!comment.empty()) out << "  // " << comment << "\n";
    out << "  rankdir=LR;\n"
        << "  node [shape=circle, style=filled];\n";
    for (const auto& n : graph.nodes)
        out << "  \"" << n.name << "\" [role=\"" << (n.transmitter ? "transmitter" : "receiver")
            << "\", net=" << fmt6(n.net) << ", fillcolor=\""
            << (n.transmitter ? "steelblue" : "gold") << "\"];\n";
    for (const auto& e : graph.edges)
        out << "  \"" << graph.nodes[static_cast<std::size_t>(e.source)].name << "\" -> \""
            << graph.nodes[static_cast<std::size_t>(e.target)].name << "\" [weight="
            << fmt6(e.weight) << ", label=\"" << fmt6(e.weight) << "\", penwidth="
            << fmt6(1.0 + 2.0 * e.weight) << "];\n";
    out << "}\n";
    return out.str();
}

std::string to_graphml(const NetworkGraph& graph, const std::string& comment) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) out << "<!-- " << comment << " -->\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n"
        << "  <key id=\"net\" for=\"node\" attr.name=\"net\" attr.type=\"double\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <graph id=\"spillover\" edgedefault=\"directed\">\n";
    for (const auto& n : graph.nodes)
        out << "    <node id=\"" << n.name << "\">\n"
            << "      <data key=\"role\">" << (n.transmitter ? "transmitter" : "receiver")
            << "</data>\n"
            << "      <data key=\"net\">" << fmt6(n.net) << "</data>\n"
            << "    </node>\n";
    std::size_t eid = 0;
    for (const auto& e : graph.edges)
        out << "    <edge id=\"e" << eid++ << "\" source=\""
            << graph.nodes[static_cast<std::size_t>(e.source)].name << "\" target=\""
            << graph.nodes[static_cast<std::size_t>(e.target)].name << "\">\n"
            << "      <data key=\"weight\">" << fmt6(e.weight) << "</data>\n"
            << "    </edge>\n";
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

}  // namespace spillover
