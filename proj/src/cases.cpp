#include "romforge/cases.hpp"

#include <stdexcept>

namespace romforge::cases {

Preset thin_beam(Index nx, Real nu) {
    Preset p;
    p.name = "thin_beam";
    p.mesh = fe::generate_beam_mesh(1.0, 0.05, 0.001, nx, 1, 1, fe::ElementKind::HEX20, true);
    p.material = fe::Material{210e9, nu, 7800.0};
    p.thickness = 0.001;
    return p;
}

Preset thick_beam(Index nx, Index ny, Index nz, Real nu) {
    Preset p;
    p.name = "thick_beam";
    p.mesh = fe::generate_beam_mesh(1.0, 0.03, 0.03, nx, ny, nz, fe::ElementKind::HEX20, true);
    p.material = fe::Material{210e9, nu, 7800.0};
    p.thickness = 0.03;
    return p;
}

Preset circular_plate(Index ns, Index nr, Index ntz) {
    Preset p;
    p.name = "circular_plate";
    p.mesh = fe::generate_circular_plate_mesh(0.3, 0.005, ns, nr, ntz, fe::ElementKind::HEX20, true);
    p.material = fe::Material{210e9, 0.3, 7800.0};
    p.thickness = 0.005;
    return p;
}

Preset circular_plate_small() {
    Preset p = circular_plate(4, 3, 2);
    p.name = "circular_plate_small";
    return p;
}

Preset by_name(const std::string& name) {
    if (name == "thin_beam")
        return thin_beam();
    if (name == "thick_beam")
        return thick_beam();
    if (name == "circular_plate")
        return circular_plate();
    if (name == "circular_plate_small")
        return circular_plate_small();
    throw std::invalid_argument("unknown case: " + name);
}

} // namespace romforge::cases
