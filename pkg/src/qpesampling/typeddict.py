from . import errors

import numbers


def _type_name(field_type):
    field_types = field_type if type(field_type) == list else [field_type]
    return ' or '.join(getattr(t, '__name__', str(t)) for t in field_types)


def _matches(value, field_type):
    field_types = field_type if type(field_type) == list else [field_type]
    for expected in field_types:
        # bool is an int subclass but never a valid count or value
        if isinstance(value, bool) and expected is not bool:
            continue
        if isinstance(value, expected):
            return True
    return False


class TypedDict(dict):
    """
    A dict whose allowed fields depend on its type.

    Subclasses declare `required_fields` and `optional_fields` as
    {type: {field: python type or list of types}}; a type of None skips the check.
    Every problem is collected before a single error is raised.
    """

    error_class = errors.QpeConfigError

    def __init__(self, type_, **kwargs):
        self.type = type_
        lookup_type = self._get_lookup_type()

        if lookup_type not in self.required_fields:
            raise self.error_class(self.type_error_message.format(type=lookup_type))

        problems = self._set_required_fields(**kwargs)
        problems.extend(self._set_optional_fields(**kwargs))
        problems.extend(self._unknown_fields(**kwargs))
        if problems:
            raise self.error_class(problems, subject=kwargs)

    def _check(self, field, field_type, value):
        if field_type and not _matches(value, field_type):
            return ['Field {} has mismatched type (expecting {}, found {})'.format(
                field, _type_name(field_type), type(value).__name__)]
        return []

    def _set_optional_fields(self, **kwargs):
        lookup_type = self._get_lookup_type()
        problems = []
        for field, field_type in self.optional_fields.get(lookup_type, {}).items():
            if field in kwargs and kwargs[field] is not None:
                problems.extend(self._check(field, field_type, kwargs[field]))
                self[field] = kwargs[field]
        return problems

    def _set_required_fields(self, **kwargs):
        lookup_type = self._get_lookup_type()
        problems = []
        for field, field_type in self.required_fields[lookup_type].items():
            if kwargs.get(field) is None:
                problems.append('Missing field: {} required for type: {}'.format(field, self.type))
                continue
            problems.extend(self._check(field, field_type, kwargs[field]))
            self[field] = kwargs[field]
        return problems

    def _unknown_fields(self, **kwargs):
        lookup_type = self._get_lookup_type()
        known = set(self.required_fields[lookup_type]) | set(
            self.optional_fields.get(lookup_type, {}))
        return ['Unknown field: {} for type: {}'.format(field, self.type)
                for field in sorted(kwargs) if field not in known and kwargs[field] is not None]

    def _get_lookup_type(self):
        return self.type

    optional_fields = {}

    required_fields = {}

    type_error_message = ''


NUMBER = [numbers.Real]
