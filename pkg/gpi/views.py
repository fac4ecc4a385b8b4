import logging

from django.shortcuts import get_object_or_404
from pydantic import ValidationError as ConfigValidationError
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from .exceptions import GpiError, NonConvergence
from .experiments import (
    gpi_defaults,
    run_centralized_experiment,
    run_distributed_experiment,
    run_oracle,
)
from .models import ExperimentRun
from .reference_networks import get_reference_network
from .serializers import ExperimentConfigSerializer, ExperimentRunSerializer, GraphSerializer

logger = logging.getLogger(__name__)


class OracleView(APIView):
    def post(self, request):
        serializer = ExperimentConfigSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
        try:
            outcome = run_oracle(serializer.validated_data, gpi_defaults())
        except (GpiError, ConfigValidationError) as exc:
            return Response({'error': str(exc)}, status=status.HTTP_400_BAD_REQUEST)
        return Response(outcome.summary, status=status.HTTP_200_OK)


class RunCreateView(APIView):
    """Runs one experiment, stores it in the registry and returns its summary."""
    runner = None

    def post(self, request):
        serializer = ExperimentConfigSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        try:
            outcome = self.runner(serializer.validated_data, gpi_defaults())
        except NonConvergence as exc:
            run = ExperimentRun.record(exc.result)
            return Response({
                'error': str(exc),
                'id': str(run.id),
                'summary': exc.result.summary,
            }, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        except (GpiError, ConfigValidationError) as exc:
            return Response({'error': str(exc)}, status=status.HTTP_400_BAD_REQUEST)

        run = ExperimentRun.record(outcome)
        logger.info("stored %s run %s on %s", run.mode, run.id, run.graph_label)
        return Response(ExperimentRunSerializer(run).data, status=status.HTTP_201_CREATED)


class CentralizedRunView(RunCreateView):
    runner = staticmethod(run_centralized_experiment)


class DistributedRunView(RunCreateView):
    runner = staticmethod(run_distributed_experiment)


class RunListView(APIView):
    def get(self, request):
        runs = ExperimentRun.objects.all()
        mode = request.query_params.get('mode')
        if mode:
            runs = runs.filter(mode=mode)
        serializer = ExperimentRunSerializer(runs, many=True)
        return Response(serializer.data)


class RunDetailView(APIView):
    def get(self, request, run_id):
        run = get_object_or_404(ExperimentRun, id=run_id)
        return Response(ExperimentRunSerializer(run).data)


class ExampleNetworkView(APIView):
    def get(self, request, name):
        ok, network = get_reference_network(name)
        if not ok:
            return Response({'error': network}, status=status.HTTP_404_NOT_FOUND)
        return Response({**network.as_dict(), "graph": GraphSerializer(network.graph()).data})
