#include "ares/render.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ares/flock_mdp.hpp"

namespace ares {

std::vector<FlockConfig> key_frames(const Plan<FlockConfig>& plan, const FlockParams& params) {
  const FlockMdp mdp(plan.initial_state.birds(), params);
  std::vector<FlockConfig> frames{plan.initial_state};
  for (const auto& block : plan.blocks) frames.push_back(rollout(mdp, frames.back(), block));
  return frames;
}

std::string render_svg(const FlockConfig& frame, const FlockParams& params, const std::string& title) {
  const double w = params.wingspan;
  const Eigen::Vector2d lo = frame.x.rowwise().minCoeff().array() - 1.5 * w;
  const Eigen::Vector2d hi = frame.x.rowwise().maxCoeff().array() + 1.5 * w;
  const Eigen::Vector2d size = hi - lo;
  const double scale = 600.0 / std::max(size.x(), size.y());
  // SVG y grows downward.
  auto px = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d((p.x() - lo.x()) * scale, (hi.y() - p.y()) * scale);
  };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size.x() * scale << "\" height=\""
      << size.y() * scale << "\" viewBox=\"0 0 " << size.x() * scale << ' ' << size.y() * scale << "\">\n"
      << "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
         "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#c0392b\"/></marker></defs>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  for (Eigen::Index i = 0; i < frame.birds(); ++i) {
    const Eigen::Vector2d x = frame.x.col(i);
    const Eigen::Vector2d v = frame.v.col(i);
    const double speed = v.norm();
    const Eigen::Vector2d dir = speed > 0 ? Eigen::Vector2d(v / speed) : Eigen::Vector2d(1, 0);
    const Eigen::Vector2d half_wing = Eigen::Vector2d(-dir.y(), dir.x()) * (w / 2);
    const Eigen::Vector2d a = px(x + half_wing), b = px(x - half_wing), c = px(x), tip = px(x + v);
    svg << "<line x1=\"" << a.x() << "\" y1=\"" << a.y() << "\" x2=\"" << b.x() << "\" y2=\"" << b.y()
        << "\" stroke=\"#2c3e50\" stroke-width=\"3\"/>\n"
        << "<line x1=\"" << c.x() << "\" y1=\"" << c.y() << "\" x2=\"" << tip.x() << "\" y2=\"" << tip.y()
        << "\" stroke=\"#c0392b\" stroke-width=\"1.5\" marker-end=\"url(#head)\"/>\n"
        << "<circle cx=\"" << c.x() << "\" cy=\"" << c.y() << "\" r=\"4\" fill=\"#2c3e50\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> render_plan(const Plan<FlockConfig>& plan, const FlockParams& params,
                                     const std::string& directory) {
  std::filesystem::create_directories(directory);
  const auto frames = key_frames(plan, params);
  std::vector<std::string> paths;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.svg", k);
    const std::string path = (std::filesystem::path(directory) / name).string();
    const std::string label = k == 0 ? "initial" : k + 1 == frames.size() ? "final, level " + std::to_string(k)
                                                                          : "level " + std::to_string(k);
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << render_svg(frames[k], params, label + ", J = " + std::to_string(fitness(frames[k], params)));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace ares
