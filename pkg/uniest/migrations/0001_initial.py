import uuid

import django.db.models.deletion
import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Run',
            fields=[
                ('id', models.CharField(max_length=36, primary_key=True, default=uuid.uuid4, serialize=False)),
                ('command', models.CharField(db_index=True, max_length=40)),
                ('d', models.IntegerField(blank=True, null=True)),
                ('samples', models.IntegerField()),
                ('seed', models.BigIntegerField()),
                ('start_time', models.DateTimeField(db_index=True, default=django.utils.timezone.now)),
                ('end_time', models.DateTimeField(blank=True, null=True)),
                ('time_taken', models.FloatField(blank=True, null=True)),
                ('passed', models.BooleanField(default=True)),
                ('encoded_config', models.TextField(blank=True, default='')),
                ('encoded_results', models.TextField(blank=True, default='')),
            ],
            options={
                'ordering': ['-start_time'],
            },
        ),
        migrations.CreateModel(
            name='Check',
            fields=[
                ('id', models.AutoField(serialize=False, primary_key=True, verbose_name='ID', auto_created=True)),
                ('name', models.CharField(max_length=80)),
                ('value', models.FloatField(blank=True, null=True)),
                ('reference', models.FloatField(blank=True, null=True)),
                ('tolerance', models.FloatField(blank=True, null=True)),
                ('passed', models.BooleanField(default=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='checks', to='uniest.run')),
            ],
        ),
    ]
