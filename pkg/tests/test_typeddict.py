from .context import qpesampling
import unittest

NUMBER = qpesampling.typeddict.NUMBER


class SamplerFields(qpesampling.typeddict.TypedDict):
    required_fields = {
        'exact': {'n_q': int, 'omega_min': NUMBER},
        'sampled': {'n_q': int, 'shots': int},
        'free': {'payload': None},
    }

    optional_fields = {
        'sampled': {'seed': int, 'label': [str, list]},
    }

    type_error_message = 'Unknown sampler "{type}"'


class TestTypedDict(unittest.TestCase):

    def test_unknown_type(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            SamplerFields('adaptive', n_q=3)
        self.assertEqual(caught.exception.errors, ['Unknown sampler "adaptive"'])

    def test_required_fields(self):
        self.assertEqual(SamplerFields('exact', n_q=4, omega_min=-1.5),
                         {'n_q': 4, 'omega_min': -1.5})
        self.assertEqual(SamplerFields('exact', n_q=4, omega_min=0), {'n_q': 4, 'omega_min': 0})

    def test_missing_required_field(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            SamplerFields('sampled', n_q=4)
        self.assertEqual(caught.exception.errors,
                         ['Missing field: shots required for type: sampled'])

    def test_untyped_field(self):
        self.assertEqual(SamplerFields('free', payload=[1, 'a']), {'payload': [1, 'a']})

    def test_optional_fields(self):
        fields = SamplerFields('sampled', n_q=2, shots=100, seed=7, label=None)
        self.assertEqual(fields, {'n_q': 2, 'shots': 100, 'seed': 7})
        self.assertEqual(SamplerFields('sampled', n_q=2, shots=100, label=['a'])['label'], ['a'])

    def test_mismatched_type(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            SamplerFields('sampled', n_q=2, shots=100, label=3)
        self.assertEqual(
            caught.exception.errors,
            ['Field label has mismatched type (expecting str or list, found int)'])

    def test_bool_is_not_a_number(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError):
            SamplerFields('exact', n_q=True, omega_min=0.0)
        with self.assertRaises(qpesampling.errors.QpeConfigError):
            SamplerFields('exact', n_q=3, omega_min=False)

    def test_unknown_field(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            SamplerFields('exact', n_q=3, omega_min=0.0, eta=0.3)
        self.assertEqual(caught.exception.errors, ['Unknown field: eta for type: exact'])

    def test_collects_every_problem(self):
        with self.assertRaises(qpesampling.errors.QpeConfigError) as caught:
            SamplerFields('sampled', n_q='three', seed=1.5, eta=0.3)
        self.assertEqual(len(caught.exception.errors), 4)
        self.assertEqual(caught.exception.subject, {'n_q': 'three', 'seed': 1.5, 'eta': 0.3})
