#include "calrisk/core.hpp"

#include <cmath>
#include <sstream>

namespace calrisk {

namespace {

void check_simplex(const Eigen::VectorXd& v, double tolerance) {
  if (v.size() == 0) throw InputError("probability vector is empty");
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0 || v[i] > 1.0) {
      std::ostringstream msg;
      msg << "probability component " << i << " = " << v[i] << " outside [0, 1]";
      throw InputError(msg.str());
    }
  }
  const double sum = v.sum();
  if (std::abs(sum - 1.0) > tolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << sum << ", not 1";
    throw InputError(msg.str());
  }
}

}  // namespace

ProbVector::ProbVector(Eigen::VectorXd values, double tolerance) : values_(std::move(values)) {
  check_simplex(values_, tolerance);
}

ProbVector::ProbVector(std::initializer_list<double> values)
    : ProbVector(Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                                   static_cast<Index>(values.size()))) {}

Sample::Sample(ProbVector p, int y) : probs(std::move(p)), label(y) {
  if (label < 0 || label >= probs.dim()) {
    throw InputError("label " + std::to_string(label) + " out of range for dimension " +
                     std::to_string(probs.dim()));
  }
}

const char* to_string(Mode mode) {
  return mode == Mode::canonical ? "cce" : "tce";
}

const char* to_string(Role role) {
  switch (role) {
    case Role::full: return "full";
    case Role::tune: return "tune";
    case Role::test: return "test";
    case Role::fold_train: return "fold_train";
    case Role::fold_holdout: return "fold_holdout";
  }
  return "unknown";
}

Dataset::Dataset(Mode mode, Role role, Eigen::MatrixXd points, std::vector<int> labels)
    : mode_(mode), role_(role), points_(std::move(points)), labels_(std::move(labels)) {}

Dataset Dataset::canonical(Eigen::MatrixXd probs, std::vector<int> labels, Role role) {
  if (static_cast<std::size_t>(probs.cols()) != labels.size()) {
    throw InputError("prediction and label counts differ");
  }
  if (probs.cols() > 0 && probs.rows() < 2) {
    throw InputError("canonical predictions need at least two classes");
  }
  for (Index i = 0; i < probs.cols(); ++i) {
    check_simplex(probs.col(i), kSimplexTolerance);
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= probs.rows()) {
      throw InputError("label " + std::to_string(y) + " of sample " + std::to_string(i) +
                       " out of range");
    }
  }
  return Dataset(Mode::canonical, role, std::move(probs), std::move(labels));
}

Dataset Dataset::top_label(Eigen::VectorXd confidences, std::vector<int> correct, Role role) {
  if (static_cast<std::size_t>(confidences.size()) != correct.size()) {
    throw InputError("confidence and correctness counts differ");
  }
  for (Index i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
      throw InputError("confidence of sample " + std::to_string(i) + " outside [0, 1]");
    }
    const int a = correct[static_cast<std::size_t>(i)];
    if (a != 0 && a != 1) {
      throw InputError("correctness of sample " + std::to_string(i) + " must be 0 or 1");
    }
  }
  Eigen::MatrixXd points = confidences.transpose();
  return Dataset(Mode::top_label, role, std::move(points), std::move(correct));
}

Dataset Dataset::from_samples(std::span<const Sample> samples) {
  if (samples.empty()) return canonical(Eigen::MatrixXd(2, 0), {});
  const Index d = samples.front().probs.dim();
  Eigen::MatrixXd probs(d, static_cast<Index>(samples.size()));
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].probs.dim() != d) throw InputError("samples have mixed dimensions");
    probs.col(static_cast<Index>(i)) = samples[i].probs.values();
    labels.push_back(samples[i].label);
  }
  return canonical(std::move(probs), std::move(labels));
}

Eigen::MatrixXd Dataset::targets() const {
  if (mode_ == Mode::top_label) {
    Eigen::MatrixXd t(1, size());
    for (Index i = 0; i < size(); ++i) t(0, i) = label(i);
    return t;
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim(), size());
  for (Index i = 0; i < size(); ++i) t(label(i), i) = 1.0;
  return t;
}

Eigen::MatrixXd Dataset::residuals() const {
  Eigen::MatrixXd r = points_;
  if (mode_ == Mode::top_label) {
    for (Index i = 0; i < size(); ++i) r(0, i) -= label(i);
  } else {
    for (Index i = 0; i < size(); ++i) r(label(i), i) -= 1.0;
  }
  return r;
}

Eigen::MatrixXd Dataset::simplex_points() const {
  if (mode_ == Mode::canonical) return points_;
  Eigen::MatrixXd s(2, size());
  s.row(0) = points_.row(0);
  s.row(1) = (1.0 - points_.row(0).array()).matrix();
  return s;
}

Dataset Dataset::to_top_label() const {
  if (mode_ == Mode::top_label) return *this;
  Eigen::VectorXd conf(size());
  std::vector<int> correct(static_cast<std::size_t>(size()));
  for (Index i = 0; i < size(); ++i) {
    const Index top = argmax(points_.col(i));
    conf[i] = points_(top, i);
    correct[static_cast<std::size_t>(i)] = top == label(i) ? 1 : 0;
  }
  Eigen::MatrixXd points = conf.transpose();
  return Dataset(Mode::top_label, role_, std::move(points), std::move(correct));
}

Dataset Dataset::subset(std::span<const Index> indices, Role role) const {
  Eigen::MatrixXd points(dim(), static_cast<Index>(indices.size()));
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Index i = indices[k];
    if (i < 0 || i >= size()) throw InputError("subset index out of range");
    points.col(static_cast<Index>(k)) = points_.col(i);
    labels.push_back(label(i));
  }
  return Dataset(mode_, role, std::move(points), std::move(labels));
}

Dataset Dataset::with_role(Role role) const {
  Dataset copy = *this;
  copy.role_ = role;
  return copy;
}

ProbVector softmax(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InputError("softmax temperature must be positive");
  }
  if (logits.empty()) throw InputError("softmax of an empty vector");
  Eigen::VectorXd z(static_cast<Index>(logits.size()));
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(logits[i])) throw InputError("non-finite logit");
    z[static_cast<Index>(i)] = logits[i] / temperature;
  }
  return ProbVector(softmax(z));
}

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  const double top = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

Index argmax(const Eigen::Ref<const Eigen::VectorXd>& values) {
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

TopLabel top_label_reduce(const ProbVector& probs, int label) {
  const Index top = argmax(probs.values());
  return {probs[top], top == label ? 1 : 0};
}

double pair_target(const Sample& a, const Sample& b, Mode mode) {
  if (a.probs.dim() != b.probs.dim()) throw InputError("pair_target: dimension mismatch");
  if (mode == Mode::top_label) {
    const TopLabel ta = top_label_reduce(a.probs, a.label);
    const TopLabel tb = top_label_reduce(b.probs, b.label);
    return (ta.confidence - ta.correct) * (tb.confidence - tb.correct);
  }
  double sum = 0.0;
  for (Index k = 0; k < a.probs.dim(); ++k) {
    const double ra = a.probs[k] - (k == a.label ? 1.0 : 0.0);
    const double rb = b.probs[k] - (k == b.label ? 1.0 : 0.0);
    sum += ra * rb;
  }
  return sum;
}

Eigen::MatrixXd pair_targets(const Dataset& data) {
  const Eigen::MatrixXd r = data.residuals();
  return r.transpose() * r;
}

}  // namespace calrisk
