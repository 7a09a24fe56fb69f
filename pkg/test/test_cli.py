# -*- coding: utf-8 -*-
"""
test_cli
~~~~~~~~

Tests for the ``diffshape`` command line.
"""
import csv
import os
import xml.etree.ElementTree as ET

import pytest

import helpers

import diffshape.cli
import diffshape.constellation
import diffshape.experiment
from diffshape import __version__


@pytest.fixture(scope='module')
def trained(tmpdir_factory):
    """
    Runs ``diffshape train`` on the tiny config once; returns the config
    path and the output directory.
    """
    directory = tmpdir_factory.mktemp('trained')
    config = helpers.write_tiny_config(directory)
    out = str(directory.join('out'))
    assert diffshape.cli.main(['train', '--config', config,
                               '--out', out]) == 0
    return config, out


def _csv_rows(path):
    with open(path, 'r', encoding='utf-8') as f:
        return list(csv.reader(f.read().splitlines()[1:]))


def _read_bytes(path):
    with open(path, 'rb') as f:
        return f.read()


class TestTrain(object):
    """
    Tests for ``diffshape train``.
    """
    def test_outputs(self, trained):
        """
        Training writes the checkpoint and the loss log.
        """
        _, out = trained
        assert os.path.isfile(os.path.join(out, 'model.json'))
        rows = _csv_rows(os.path.join(out, 'training_log.csv'))
        assert rows[0] == ['step', 'loss']
        assert len(rows) == 1 + 16

    def test_rerun_is_byte_identical(self, trained, tmpdir):
        """
        Training twice with the same config and seed gives identical files.
        """
        config, out = trained
        again = str(tmpdir.join('again'))
        assert diffshape.cli.main(['train', '--config', config,
                                   '--out', again]) == 0
        for name in ('model.json', 'training_log.csv'):
            assert _read_bytes(os.path.join(out, name)) == \
                _read_bytes(os.path.join(again, name))

    def test_seed_override(self, trained, tmpdir):
        """
        --seed trains another model.
        """
        config, out = trained
        other = str(tmpdir.join('other'))
        assert diffshape.cli.main(['train', '--config', config, '--seed',
                                   '8', '--out', other]) == 0
        assert _read_bytes(os.path.join(out, 'model.json')) != \
            _read_bytes(os.path.join(other, 'model.json'))

    def test_output_dir_from_environment(self, trained, tmpdir,
                                         monkeypatch):
        """
        Without --out, the environment variable names the output directory.
        """
        config, _ = trained
        target = str(tmpdir.join('from_env'))
        monkeypatch.setenv(diffshape.cli.OUTPUT_DIR_ENV, target)
        assert diffshape.cli.main(['train', '--config', config]) == 0
        assert os.path.isfile(os.path.join(target, 'model.json'))

    def test_invalid_config_exits_2(self, tmpdir, capsys):
        """
        A configuration error is reported with exit status 2.
        """
        path = tmpdir.join('bad.conf')
        path.write('modulation_order = 12\nsweep.snr_db = 0\n')
        status = diffshape.cli.main(['train', '--config', str(path),
                                     '--out', str(tmpdir)])
        assert status == 2
        assert 'modulation_order' in capsys.readouterr().err

    @pytest.mark.parametrize('schedule', [
        'beta_min = 0.5\nbeta_max = 0.1\n',
        't_steps = 0\n',
        'beta_max = 1.5\n',
    ])
    def test_invalid_schedule_exits_2(self, tmpdir, capsys, schedule):
        """
        A schedule that cannot be built is a configuration error, found
        before any training starts.
        """
        path = tmpdir.join('bad.conf')
        path.write('modulation_order = 4\nsweep.snr_db = 0\n' + schedule)
        status = diffshape.cli.main(['train', '--config', str(path),
                                     '--out', str(tmpdir)])
        assert status == 2
        assert 'error:' in capsys.readouterr().err
        assert not tmpdir.join('model.json').check()

    def test_unparseable_config_names_line(self, tmpdir, capsys):
        """
        Syntax errors name the offending line.
        """
        path = tmpdir.join('bad.conf')
        path.write('modulation_order = 4\nthis is not valid\n')
        status = diffshape.cli.main(['train', '--config', str(path),
                                     '--out', str(tmpdir)])
        assert status == 2
        assert 'line 2' in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmpdir):
        """
        An unreadable configuration is a configuration error.
        """
        status = diffshape.cli.main([
            'train', '--config', str(tmpdir.join('nope.conf')),
            '--out', str(tmpdir),
        ])
        assert status == 2


class TestUsage(object):
    """
    Tests for argument handling.
    """
    @pytest.mark.parametrize('argv', [
        [],
        ['train'],
        ['frobnicate'],
        ['shape', '--model', 'm.json'],
        ['reconstruct', '--model', 'm.json', '--input', 'y.csv',
         '--passes', '0'],
    ])
    def test_bad_usage_exits_2(self, argv):
        """
        Usage errors exit with status 2.
        """
        assert diffshape.cli.main(argv) == 2

    def test_version(self, capsys):
        """
        --version prints the package version and exits cleanly.
        """
        assert diffshape.cli.main(['--version']) == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_model_exits_3(self, tmpdir):
        """
        A checkpoint that cannot be opened is a runtime failure.
        """
        status = diffshape.cli.main([
            'shape', '--model', str(tmpdir.join('missing.json')),
            '--snr-db', '0', '--out', str(tmpdir),
        ])
        assert status == 3

    def test_corrupt_model_exits_3(self, tmpdir):
        """
        A malformed checkpoint is a runtime failure.
        """
        model = tmpdir.join('model.json')
        model.write('{"version": 1')
        status = diffshape.cli.main([
            'shape', '--model', str(model), '--snr-db', '0',
            '--out', str(tmpdir),
        ])
        assert status == 3


class TestShape(object):
    """
    Tests for ``diffshape shape``.
    """
    def test_writes_distribution(self, trained, tmpdir, capsys):
        """
        The distribution file has one row per symbol and sums to one; the
        entropy is printed.
        """
        _, out = trained
        status = diffshape.cli.main([
            'shape', '--model', os.path.join(out, 'model.json'),
            '--snr-db', '-5', '--n-samples', '100', '--out', str(tmpdir),
        ])
        assert status == 0
        rows = _csv_rows(str(tmpdir.join('distribution_-5dB.csv')))
        assert rows[0] == ['symbol_index', 'i', 'q', 'probability']
        assert len(rows) == 5
        assert sum(float(r[3]) for r in rows[1:]) == pytest.approx(1.0)
        printed = capsys.readouterr().out
        assert 'entropy_bits=' in printed


class TestSimulate(object):
    """
    Tests for ``diffshape simulate``.
    """
    def test_single_point(self, trained, tmpdir, capsys):
        """
        One result row is written and the metrics are printed.
        """
        config, out = trained
        status = diffshape.cli.main([
            'simulate', '--model', os.path.join(out, 'model.json'),
            '--config', config, '--snr-db', '5', '--scheme', 'uniform',
            '--channel', 'laplacian', '--symbols', '300',
            '--out', str(tmpdir),
        ])
        assert status == 0
        path = str(tmpdir.join('simulate_uniform_laplacian_5dB.csv'))
        rows = _csv_rows(path)
        assert rows[0] == list(diffshape.experiment.RESULT_FIELDS)
        assert rows[1][:3] == ['uniform', 'laplacian', '5.0']
        assert 'mi_bits=' in capsys.readouterr().out

    def test_config_for_other_order_exits_2(self, trained, tmpdir):
        """
        A 16-QAM configuration cannot drive a 4-QAM model.
        """
        _, out = trained
        status = diffshape.cli.main([
            'simulate', '--model', os.path.join(out, 'model.json'),
            '--config', 'default_16qam', '--snr-db', '0',
            '--out', str(tmpdir),
        ])
        assert status == 2


class TestSweep(object):
    """
    Tests for ``diffshape sweep``.
    """
    def test_sweep_outputs(self, trained, tmpdir):
        """
        The sweep writes twelve result rows and a chart with one polyline
        per scheme and channel.
        """
        config, out = trained
        status = diffshape.cli.main([
            'sweep', '--config', config, '--out', str(tmpdir),
            '--model', os.path.join(out, 'model.json'),
        ])
        assert status == 0
        rows = _csv_rows(str(tmpdir.join('sweep.csv')))
        assert rows[0] == list(diffshape.experiment.RESULT_FIELDS)
        assert len(rows) == 13

        root = ET.parse(str(tmpdir.join('sweep.svg'))).getroot()
        lines = root.findall('{http://www.w3.org/2000/svg}polyline')
        assert len(lines) == 6

        meta = diffshape.experiment.read_comment(str(tmpdir.join(
            'sweep.csv'
        )))
        assert meta['seed'] == '7'

    def test_sweep_is_reproducible(self, trained, tmpdir):
        """
        Sweeping twice, training included, gives identical results.
        """
        config, _ = trained
        first = str(tmpdir.join('first'))
        second = str(tmpdir.join('second'))
        for out in (first, second):
            assert diffshape.cli.main(['sweep', '--config', config,
                                       '--out', out]) == 0
        assert _read_bytes(os.path.join(first, 'sweep.csv')) == \
            _read_bytes(os.path.join(second, 'sweep.csv'))


class TestReconstruct(object):
    """
    Tests for ``diffshape reconstruct``.
    """
    def _samples(self, tmpdir, text='i,q\n0.7,0.7\n-0.7,0.6\n0.1,-0.8\n'):
        path = tmpdir.join('y.csv')
        path.write(text)
        return str(path)

    def test_writes_decisions(self, trained, tmpdir):
        """
        Each sample gets a symbol index in 1..M.
        """
        _, out = trained
        status = diffshape.cli.main([
            'reconstruct', '--model', os.path.join(out, 'model.json'),
            '--input', self._samples(tmpdir), '--out', str(tmpdir),
        ])
        assert status == 0
        rows = _csv_rows(str(tmpdir.join('reconstruction.csv')))
        assert rows[0] == ['i', 'q', 'symbol_index']
        assert len(rows) == 4
        assert all(1 <= int(r[2]) <= 4 for r in rows[1:])

    def test_noiseless_constellation_round_trips(self, trained, tmpdir):
        """
        With --snr-db inf, the constellation points decode to their own
        indices.
        """
        _, out = trained
        points = diffshape.constellation.make_qam(4).points
        text = 'i,q\n' + ''.join('%r,%r\n' % (float(i), float(q))
                                  for i, q in points)
        status = diffshape.cli.main([
            'reconstruct', '--model', os.path.join(out, 'model.json'),
            '--input', self._samples(tmpdir, text), '--snr-db', 'inf',
            '--out', str(tmpdir),
        ])
        assert status == 0
        rows = _csv_rows(str(tmpdir.join('reconstruction.csv')))
        assert [int(r[2]) for r in rows[1:]] == [1, 2, 3, 4]

    def test_single_pass_matches_default(self, trained, tmpdir):
        """
        --passes 1 decides what the plain receiver decides, and adds the
        posterior columns.
        """
        _, out = trained
        model = os.path.join(out, 'model.json')
        samples = self._samples(tmpdir)
        plain = str(tmpdir.join('plain'))
        soft = str(tmpdir.join('soft'))
        assert diffshape.cli.main(['reconstruct', '--model', model,
                                   '--input', samples, '--out', plain]) == 0
        assert diffshape.cli.main(['reconstruct', '--model', model,
                                   '--input', samples, '--passes', '1',
                                   '--out', soft]) == 0
        plain_rows = _csv_rows(os.path.join(plain, 'reconstruction.csv'))
        soft_rows = _csv_rows(os.path.join(soft, 'reconstruction.csv'))
        assert soft_rows[0] == ['i', 'q', 'symbol_index',
                                'p_1', 'p_2', 'p_3', 'p_4']
        assert [r[2] for r in plain_rows] == [r[2] for r in soft_rows]

    def test_malformed_row_exits_3(self, trained, tmpdir, capsys):
        """
        A bad sample row fails with status 3, naming its line.
        """
        _, out = trained
        samples = self._samples(tmpdir, 'i,q\n0.1,0.2\n0.3,oops\n')
        status = diffshape.cli.main([
            'reconstruct', '--model', os.path.join(out, 'model.json'),
            '--input', samples, '--out', str(tmpdir),
        ])
        assert status == 3
        assert 'line 3' in capsys.readouterr().err
