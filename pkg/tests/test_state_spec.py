import numpy as np
import pytest
from numpy.testing import assert_allclose

from weakprobe.commands.state_spec import parse_state_spec
from weakprobe.errors import StateSpecError
from weakprobe.models import DensityMatrix, Ket
from weakprobe.services import qstate


class TestParseStateSpec:
    @pytest.mark.parametrize('name', ['H', 'v', 'D', 'a', 'R', 'L'])
    def test_named(self, name):
        assert parse_state_spec(name) is qstate.named_state(name)

    def test_maximally_mixed(self):
        state = parse_state_spec('I')
        assert isinstance(state, DensityMatrix)
        assert_allclose(state.m, np.eye(2) / 2)

    def test_waveplates(self):
        state = parse_state_spec('hwp:22.5,qwp:0')
        assert abs(state.overlap(qstate.R)) == pytest.approx(1.0)
        assert_allclose(parse_state_spec('hwp:22.5').amps, qstate.D.amps, atol=1e-12)

    def test_explicit_ket_is_normalised(self):
        state = parse_state_spec('ket:3,0,0,4')
        assert isinstance(state, Ket)
        assert_allclose(state.amps, [0.6, 0.8j])

    def test_explicit_density_matrix(self):
        state = parse_state_spec('rho:0.5,0,0,0.5,0,-0.5,0.5,0')
        assert_allclose(state.m, qstate.density_of(qstate.L).m, atol=1e-12)

    @pytest.mark.parametrize('spec', [
        '',
        'Q',
        'ket:1,0,0',
        'ket:1,0,x,0',
        'rho:1,0,0,0,0,0,0.5,0',
        'rho:1.2,0,0,0,0,0,-0.2,0',
        'hwp:abc',
        'qwp:45',
        'hwp:10,hwp:20',
        'ket:0,0,0,0',
    ])
    def test_rejected(self, spec):
        with pytest.raises(StateSpecError):
            parse_state_spec(spec)

    def test_state_file(self, tmp_path):
        path = tmp_path / 'state.yaml'
        path.write_text('state: "hwp:0,qwp:45"\n')
        assert abs(parse_state_spec(str(path)).overlap(qstate.L)) == pytest.approx(1.0)

    def test_state_file_without_entry(self, tmp_path):
        path = tmp_path / 'state.yaml'
        path.write_text('hwp: 10\n')
        with pytest.raises(StateSpecError):
            parse_state_spec(str(path))
