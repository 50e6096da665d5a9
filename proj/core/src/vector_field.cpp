#include "pathlik/vector_field.hpp"

#include <stdexcept>

namespace pathlik {

ParametricVectorField with_fd_gradients(ParametricVectorField field, double step) {
    if (!field.grad_a) {
        auto a = field.a;
        const int d = field.d;
        field.grad_a = [a, d, step](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
            Eigen::MatrixXd g(d, d);
            Eigen::VectorXd yp = y, ym = y;
            for (int j = 0; j < d; ++j) {
                yp[j] += step;
                ym[j] -= step;
                g.col(j) = (a(yp, th) - a(ym, th)) / (2.0 * step);
                yp[j] = y[j];
                ym[j] = y[j];
            }
            return g;
        };
        field.fd_gradients = true;
    }
    if (!field.grad_b) {
        auto b = field.b;
        const int d = field.d;
        const int m = field.m;
        field.grad_b = [b, d, m, step](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
            std::vector<Eigen::MatrixXd> g(static_cast<std::size_t>(m),
                                           Eigen::MatrixXd(d, d));
            Eigen::VectorXd yp = y, ym = y;
            for (int j = 0; j < d; ++j) {
                yp[j] += step;
                ym[j] -= step;
                const Eigen::MatrixXd diff = (b(yp, th) - b(ym, th)) / (2.0 * step);
                for (int beta = 0; beta < m; ++beta) {
                    g[static_cast<std::size_t>(beta)].col(j) = diff.col(beta);
                }
                yp[j] = y[j];
                ym[j] = y[j];
            }
            return g;
        };
        field.fd_gradients = true;
    }
    return field;
}

ParametricVectorField make_fou_field() {
    ParametricVectorField f;
    f.d = 1;
    f.m = 1;
    f.a = [](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
        return Eigen::VectorXd::Constant(1, -th[0] * y[0]);
    };
    f.b = [](const Eigen::VectorXd&, const Eigen::VectorXd& th) {
        return Eigen::MatrixXd::Constant(1, 1, th[1]);
    };
    f.grad_a = [](const Eigen::VectorXd&, const Eigen::VectorXd& th) {
        return Eigen::MatrixXd::Constant(1, 1, -th[0]);
    };
    f.grad_b = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Zero(1, 1)};
    };
    return f;
}

ParametricVectorField make_pure_integrator(int d) {
    if (d < 1) throw std::invalid_argument("pure integrator dimension must be >= 1");
    ParametricVectorField f;
    f.d = d;
    f.m = d;
    f.a = [d](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(d);
    };
    f.b = [d](const Eigen::VectorXd&, const Eigen::VectorXd& th) {
        return Eigen::MatrixXd(th[0] * Eigen::MatrixXd::Identity(d, d));
    };
    f.grad_a = [d](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Zero(d, d);
    };
    f.grad_b = [d](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d),
                                            Eigen::MatrixXd::Zero(d, d));
    };
    return f;
}

ParametricVectorField make_rotor2d_field() {
    ParametricVectorField f;
    f.d = 2;
    f.m = 2;
    f.a = [](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
        Eigen::VectorXd out(2);
        out << -th[0] * y[1], th[0] * y[0];
        return out;
    };
    f.b = [](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
        const double q = y[0] * y[0];
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2, 2);
        out(0, 0) = th[1];
        out(1, 1) = th[1] * (1.0 + q / (1.0 + q));
        return out;
    };
    f.grad_a = [](const Eigen::VectorXd&, const Eigen::VectorXd& th) {
        Eigen::MatrixXd g(2, 2);
        g << 0.0, -th[0], th[0], 0.0;
        return g;
    };
    f.grad_b = [](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
        std::vector<Eigen::MatrixXd> g(2, Eigen::MatrixXd::Zero(2, 2));
        const double denom = 1.0 + y[0] * y[0];
        // d/dy1 of (1 + y1^2/(1+y1^2)) = 2 y1 / (1+y1^2)^2
        g[1](1, 0) = th[1] * 2.0 * y[0] / (denom * denom);
        return g;
    };
    return f;
}

ParametricVectorField make_ou_mix_field() {
    ParametricVectorField f;
    f.d = 1;
    f.m = 2;
    f.a = [](const Eigen::VectorXd& y, const Eigen::VectorXd& th) {
        return Eigen::VectorXd::Constant(1, -th[0] * y[0]);
    };
    f.b = [](const Eigen::VectorXd&, const Eigen::VectorXd& th) {
        Eigen::MatrixXd out(1, 2);
        out << th[1], th[2];
        return out;
    };
    f.grad_a = [](const Eigen::VectorXd&, const Eigen::VectorXd& th) {
        return Eigen::MatrixXd::Constant(1, 1, -th[0]);
    };
    f.grad_b = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return std::vector<Eigen::MatrixXd>(2, Eigen::MatrixXd::Zero(1, 1));
    };
    return f;
}

FieldRegistry& FieldRegistry::instance() {
    static FieldRegistry registry;
    return registry;
}

FieldRegistry::FieldRegistry() {
    {
        FieldInfo info;
        info.field = make_fou_field();
        info.theta_names = {"lambda", "sigma"};
        info.default_theta = Eigen::Vector2d(1.0, 1.0);
        info.validate = [](const Eigen::VectorXd& th) {
            if (th.size() != 2) throw std::invalid_argument("fou expects theta = (lambda, sigma)");
            if (!(th[0] > 0.0)) throw std::invalid_argument("fou: lambda must be positive");
            if (!(th[1] > 0.0)) throw std::invalid_argument("fou: sigma must be positive");
        };
        info.description = "scalar mean-reverting state, a=-lambda*y, b=sigma";
        fields_.emplace("fou", std::move(info));
    }
    {
        FieldInfo info;
        info.field = make_pure_integrator(1);
        info.theta_names = {"sigma"};
        info.default_theta = Eigen::VectorXd::Constant(1, 1.0);
        info.validate = [](const Eigen::VectorXd& th) {
            if (th.size() != 1) throw std::invalid_argument("pure_integrator expects theta = (sigma)");
            if (th[0] == 0.0) throw std::invalid_argument("pure_integrator: sigma must be nonzero");
        };
        info.description = "driftless scalar state, b=sigma";
        fields_.emplace("pure_integrator", std::move(info));
    }
    {
        FieldInfo info;
        info.field = make_rotor2d_field();
        info.theta_names = {"omega", "kappa"};
        info.default_theta = Eigen::Vector2d(1.0, 1.0);
        info.validate = [](const Eigen::VectorXd& th) {
            if (th.size() != 2) throw std::invalid_argument("rotor2d expects theta = (omega, kappa)");
            if (th[1] == 0.0) throw std::invalid_argument("rotor2d: kappa must be nonzero");
        };
        info.description = "planar rotational drift with state-dependent diagonal dispersion";
        fields_.emplace("rotor2d", std::move(info));
    }
    {
        FieldInfo info;
        info.field = make_ou_mix_field();
        info.theta_names = {"lambda", "sigma1", "sigma2"};
        info.default_theta = Eigen::Vector3d(1.0, 1.0, 0.5);
        info.validate = [](const Eigen::VectorXd& th) {
            if (th.size() != 3) {
                throw std::invalid_argument("ou_mix expects theta = (lambda, sigma1, sigma2)");
            }
            if (th[1] == 0.0) throw std::invalid_argument("ou_mix: sigma1 must be nonzero");
        };
        info.description = "scalar mean-reverting state driven by two channels";
        fields_.emplace("ou_mix", std::move(info));
    }
}

void FieldRegistry::add(const std::string& id, FieldInfo info) {
    fields_[id] = std::move(info);
}

bool FieldRegistry::has(const std::string& id) const {
    return fields_.count(id) > 0;
}

const FieldInfo& FieldRegistry::get(const std::string& id) const {
    auto it = fields_.find(id);
    if (it == fields_.end()) {
        throw std::invalid_argument("unknown model id '" + id + "'");
    }
    return it->second;
}

std::vector<std::string> FieldRegistry::ids() const {
    std::vector<std::string> out;
    out.reserve(fields_.size());
    for (const auto& [id, _] : fields_) out.push_back(id);
    return out;
}

}  // namespace pathlik
